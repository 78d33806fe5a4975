// Exact scalar arithmetic: arbitrary-precision rationals plus the projective
// line P^1(Q) as a scalar type.  Points of P^1(Q) are stored as a canonical
// coprime integer pair (p:q) whose first nonzero entry is positive; (0:0) is
// the in-band "undefined" value, so degenerate cross-ratios flow through
// computations instead of aborting them.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <utility>

namespace moduli {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Tri-state outcome of comparing P^1(Q) values: undefined values are neither
// equal nor unequal to anything.
enum class Cmp { Equal, Unequal, Incomparable };

class ExtScalar {
public:
    ExtScalar() : p_(0), q_(1) {}
    ExtScalar(Int p, Int q) : p_(std::move(p)), q_(std::move(q)) { canonicalize(); }
    ExtScalar(long p, long q) : p_(p), q_(q) { canonicalize(); }
    explicit ExtScalar(const Rat& r) : p_(rat_num(r)), q_(rat_den(r)) { canonicalize(); }

    static ExtScalar zero() { return ExtScalar(0, 1); }
    static ExtScalar one() { return ExtScalar(1, 1); }
    static ExtScalar infinity() { return ExtScalar(1, 0); }
    static ExtScalar undefined() { return ExtScalar(0, 0); }

    // Projective pair of rationals (a : b), cleared to an integer pair.
    static ExtScalar from_pair(const Rat& a, const Rat& b) {
        return ExtScalar(rat_num(a) * rat_den(b), rat_num(b) * rat_den(a));
    }

    std::pair<Int, Int> repr() const { return {p_, q_}; }

    bool is_undefined() const { return p_ == 0 && q_ == 0; }
    bool is_infinity() const { return q_ == 0 && p_ != 0; }
    bool is_finite() const { return q_ != 0; }
    bool is_zero() const { return p_ == 0 && q_ != 0; }
    bool is_nonzero_finite() const { return p_ != 0 && q_ != 0; }

    Rat to_rat() const {
        if (!is_finite()) throw std::domain_error("ExtScalar: not finite");
        return q_ < 0 ? Rat(-p_, -q_) : Rat(p_, q_);
    }

    std::string str() const {
        if (is_undefined()) return "undef";
        if (is_infinity()) return "inf";
        Rat r = to_rat();
        std::string s = rat_num(r).str();
        if (rat_den(r) != 1) s += "/" + rat_den(r).str();
        return s;
    }

private:
    void canonicalize() {
        if (p_ == 0 && q_ == 0) return;
        Int g = boost::multiprecision::gcd(boost::multiprecision::abs(p_),
                                           boost::multiprecision::abs(q_));
        if (g != 0) { p_ /= g; q_ /= g; }
        if (p_ < 0 || (p_ == 0 && q_ < 0)) { p_ = -p_; q_ = -q_; }
    }

    Int p_, q_;
};

inline ExtScalar ext_mul(const ExtScalar& a, const ExtScalar& b) {
    auto [p1, q1] = a.repr();
    auto [p2, q2] = b.repr();
    return ExtScalar(p1 * p2, q1 * q2);
}

inline ExtScalar ext_inv(const ExtScalar& a) {
    auto [p, q] = a.repr();
    return ExtScalar(q, p);
}

inline ExtScalar ext_neg(const ExtScalar& a) {
    auto [p, q] = a.repr();
    return ExtScalar(-p, q);
}

inline ExtScalar ext_div(const ExtScalar& a, const ExtScalar& b) {
    return ext_mul(a, ext_inv(b));
}

inline Cmp ext_eq(const ExtScalar& a, const ExtScalar& b) {
    if (a.is_undefined() || b.is_undefined()) return Cmp::Incomparable;
    auto [p1, q1] = a.repr();
    auto [p2, q2] = b.repr();
    return p1 * q2 == p2 * q1 ? Cmp::Equal : Cmp::Unequal;
}

// Structural identity of canonical representatives (undefined == undefined);
// used by tests, not by geometric comparisons.
inline bool ext_eq_struct(const ExtScalar& a, const ExtScalar& b) {
    return a.repr() == b.repr();
}

}  // namespace moduli
