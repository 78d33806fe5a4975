// Rational functions over Q: a pair of polynomials with a denominator that
// is not identically zero.  Construction reduces common factors and fixes the
// denominator's sign, equality is cross-multiplication, and evaluation lands
// in P^1(Q) so that 0/0 points flow through as the in-band undefined value.
#pragma once

#include <moduli/poly.hpp>

namespace moduli {

class RatFunc {
public:
    RatFunc() : num_(Poly::zero()), den_(Poly::one()) {}
    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero())
            throw std::domain_error("RatFunc: identically zero denominator");
        reduce();
    }
    explicit RatFunc(const Poly& p) : num_(p), den_(Poly::one()) {}

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }

    static RatFunc parse(const std::string& s) {
        try {
            return RatFunc(Poly::parse(s));
        } catch (const ParseError&) {
        }
        int depth = 0;
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            else if (s[i] == ')') --depth;
            else if (s[i] == '/' && depth == 0) {
                try {
                    return RatFunc(Poly::parse(s.substr(0, i)),
                                   Poly::parse(s.substr(i + 1)));
                } catch (const ParseError&) {
                }
            }
        }
        throw ParseError("cannot parse rational function: '" + s + "'");
    }

    std::string str() const {
        if (den_ == Poly::one()) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

    ExtScalar eval(const std::map<Var, Rat>& at) const {
        return ExtScalar::from_pair(num_.eval(at), den_.eval(at));
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc operator-() const { return RatFunc(-num_, den_); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.num_.is_zero())
            throw std::domain_error("RatFunc: division by zero function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }

private:
    void reduce() {
        if (num_.is_zero()) { den_ = Poly::one(); return; }
        Poly g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = *divide_exact(num_, g);
            den_ = *divide_exact(den_, g);
        }
        Rat s = poly_normal_scale(den_);
        num_ = num_ * s;
        den_ = den_ * s;
    }

    Poly num_, den_;
};

}  // namespace moduli
