// Sparse multivariate polynomials over Q.
//
// Variables are letter/chart pairs (letters t,x,y,z), printed "x_1", ordered
// by (chart, letter).  Terms are kept in a graded order: lower total degree
// first, ties broken so that monomials read like dictionary words in the
// variable order ("x_1*x_1" before "x_1*y_1" before "y_1*y_1").  Printing
// walks that order ascending and the grammar printed is exactly the grammar
// parsed: integers, p/q, variables, +, -, *, parentheses, no powers.
#pragma once

#include <moduli/rational.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace moduli {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Var {
    int chart = 0;
    char base = 'x';
    friend auto operator<=>(const Var&, const Var&) = default;
};

inline std::string var_str(Var v) {
    return std::string(1, v.base) + "_" + std::to_string(v.chart);
}

inline bool valid_base(char c) {
    return c == 't' || c == 'x' || c == 'y' || c == 'z';
}

inline Var parse_var(const std::string& s) {
    if (s.size() < 3 || !valid_base(s[0]) || s[1] != '_')
        throw ParseError("bad variable name: " + s);
    for (size_t i = 2; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw ParseError("bad variable name: " + s);
    return Var{std::stoi(s.substr(2)), s[0]};
}

// exponent list sorted by Var, all exponents > 0
using Monomial = std::vector<std::pair<Var, int>>;

inline int mono_degree(const Monomial& m) {
    int d = 0;
    for (auto& [v, e] : m) d += e;
    return d;
}

// graded; within a degree the monomial with the higher exponent on the
// earliest differing variable comes first
inline bool mono_less(const Monomial& a, const Monomial& b) {
    int da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da < db;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (i == a.size()) return false;  // b has an earlier... a exhausted
        if (j == b.size()) return true;
        if (a[i].first != b[j].first) {
            // the one owning the earlier variable has positive exponent there
            return a[i].first < b[j].first;
        }
        if (a[i].second != b[j].second) return a[i].second > b[j].second;
        ++i, ++j;
    }
    return false;
}

struct MonoCmp {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return mono_less(a, b);
    }
};

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) r.push_back(a[i++]);
        else if (b[j].first < a[i].first) r.push_back(b[j++]);
        else { r.push_back({a[i].first, a[i].second + b[j].second}); ++i, ++j; }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    return r;
}

inline std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial r;
    size_t i = 0;
    for (auto& [v, e] : b) {
        while (i < a.size() && a[i].first < v) r.push_back(a[i++]);
        if (i == a.size() || a[i].first != v || a[i].second < e) return std::nullopt;
        if (a[i].second > e) r.push_back({v, a[i].second - e});
        ++i;
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    return r;
}

class Poly {
public:
    using TermMap = std::map<Monomial, Rat, MonoCmp>;

    Poly() = default;

    static Poly zero() { return Poly(); }
    static Poly one() { return constant(Rat(1)); }
    static Poly constant(const Rat& c) {
        Poly p;
        if (c != 0) p.terms_[{}] = c;
        return p;
    }
    static Poly variable(Var v) {
        Poly p;
        p.terms_[{{v, 1}}] = Rat(1);
        return p;
    }
    static Poly term(const Monomial& m, const Rat& c) {
        Poly p;
        if (c != 0) p.terms_[m] = c;
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Rat constant_value() const {
        if (is_zero()) return Rat(0);
        if (!is_constant()) throw std::domain_error("Poly: not a constant");
        return terms_.begin()->second;
    }

    const TermMap& terms() const { return terms_; }

    int total_degree() const {
        if (terms_.empty()) return -1;
        return mono_degree(terms_.rbegin()->first);
    }

    int degree_in(Var v) const {
        int d = 0;
        for (auto& [m, c] : terms_)
            for (auto& [w, e] : m)
                if (w == v) d = std::max(d, e);
        return d;
    }

    std::set<Var> vars() const {
        std::set<Var> s;
        for (auto& [m, c] : terms_)
            for (auto& [w, e] : m) s.insert(w);
        return s;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    Poly operator-() const {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Poly& operator+=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator*(const Poly& a, const Rat& c) {
        Poly r;
        if (c == 0) return r;
        r = a;
        for (auto& [m, k] : r.terms_) k *= c;
        return r;
    }

    Poly subst(Var v, const Poly& val) const {
        Poly r;
        std::vector<Poly> powers = {Poly::one()};
        for (auto& [m, c] : terms_) {
            int e = 0;
            Monomial rest;
            for (auto& [w, k] : m)
                if (w == v) e = k;
                else rest.push_back({w, k});
            while (static_cast<int>(powers.size()) <= e)
                powers.push_back(powers.back() * val);
            r += Poly::term(rest, c) * powers[e];
        }
        return r;
    }

    Poly zero_out(const std::set<Var>& vs) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            bool hit = false;
            for (auto& [w, e] : m)
                if (vs.count(w)) { hit = true; break; }
            if (!hit) r.add_term(m, c);
        }
        return r;
    }

    Rat eval(const std::map<Var, Rat>& at) const {
        Rat total = 0;
        for (auto& [m, c] : terms_) {
            Rat t = c;
            for (auto& [w, e] : m) {
                auto it = at.find(w);
                if (it == at.end())
                    throw std::domain_error("Poly::eval: unassigned " + var_str(w));
                for (int k = 0; k < e; ++k) t *= it->second;
            }
            total += t;
        }
        return total;
    }

    Poly derivative(Var v) const {
        Poly r;
        for (auto& [m, c] : terms_) {
            Monomial rest;
            int e = 0;
            for (auto& [w, k] : m)
                if (w == v) e = k;
                else rest.push_back({w, k});
            if (e == 0) continue;
            Monomial dm = rest;
            if (e > 1) {
                dm.clear();
                for (auto& [w, k] : m)
                    dm.push_back({w, w == v ? k - 1 : k});
            }
            std::sort(dm.begin(), dm.end());
            r.add_term(dm, c * e);
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto& [m, c] : terms_) {
            Rat a = c;
            if (first) {
                if (a < 0) { out += "-"; a = -a; }
                first = false;
            } else {
                out += a < 0 ? " - " : " + ";
                if (a < 0) a = -a;
            }
            std::string mono;
            for (auto& [w, e] : m)
                for (int k = 0; k < e; ++k) {
                    if (!mono.empty()) mono += "*";
                    mono += var_str(w);
                }
            if (mono.empty()) out += rat_str(a);
            else {
                if (a != 1) out += rat_str(a) + "*";
                out += mono;
            }
        }
        return out;
    }

    static std::string rat_str(const Rat& r) {
        std::string s = rat_num(r).str();
        if (rat_den(r) != 1) s += "/" + rat_den(r).str();
        return s;
    }

    static Poly parse(const std::string& s) {
        Parser p{s, 0};
        Poly r = p.expr();
        p.skip();
        if (p.pos != s.size())
            throw ParseError("trailing input in polynomial: '" + s.substr(p.pos) + "'");
        return r;
    }

private:
    void add_term(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) terms_[m] = c;
        else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    struct Parser {
        const std::string& s;
        size_t pos;

        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) { ++pos; return true; }
            return false;
        }
        char peek() {
            skip();
            return pos < s.size() ? s[pos] : '\0';
        }

        Poly expr() {
            Poly r = term();
            for (;;) {
                char c = peek();
                if (c == '+') { ++pos; r += term(); }
                else if (c == '-') { ++pos; r -= term(); }
                else return r;
            }
        }
        Poly term() {
            Poly r = factor();
            while (eat('*')) r *= factor();
            return r;
        }
        Poly factor() {
            if (eat('-')) return -factor();
            return atom();
        }
        Poly atom() {
            char c = peek();
            if (c == '(') {
                ++pos;
                Poly r = expr();
                if (!eat(')')) throw ParseError("expected ')'");
                return r;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                Int num = integer();
                size_t save = pos;
                if (eat('/')) {
                    if (std::isdigit(static_cast<unsigned char>(peek()))) {
                        Int den = integer();
                        if (den == 0) throw ParseError("zero denominator");
                        return Poly::constant(Rat(num, den));
                    }
                    pos = save;
                }
                return Poly::constant(Rat(num));
            }
            if (valid_base(c)) {
                size_t start = pos;
                ++pos;
                if (pos >= s.size() || s[pos] != '_')
                    throw ParseError("bad variable at '" + s.substr(start) + "'");
                ++pos;
                size_t d0 = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos == d0) throw ParseError("bad variable at '" + s.substr(start) + "'");
                return Poly::variable(Var{std::stoi(s.substr(d0, pos - d0)), c});
            }
            throw ParseError(std::string("unexpected character '") + c + "' in polynomial");
        }
        Int integer() {
            skip();
            size_t d0 = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == d0) throw ParseError("expected integer");
            return Int(s.substr(d0, pos - d0));
        }
    };

    TermMap terms_;
};

inline std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) return std::nullopt;
    Poly r = a, q;
    auto& bt = b.terms();
    const Monomial& lb = bt.rbegin()->first;
    const Rat& cb = bt.rbegin()->second;
    while (!r.is_zero()) {
        const Monomial& lr = r.terms().rbegin()->first;
        auto m = mono_div(lr, lb);
        if (!m) return std::nullopt;
        Poly t = Poly::term(*m, r.terms().rbegin()->second / cb);
        q += t;
        r -= t * b;
    }
    return q;
}

// product of min-exponent powers across all terms ("x_1*y_1" for
// x_1^2 y_1 + x_1 y_1^2); 1 for constants and for the zero polynomial
inline Poly mono_content_poly(const Poly& p) {
    if (p.is_zero()) return Poly::one();
    Monomial g = p.terms().begin()->first;
    for (auto& [m, c] : p.terms()) {
        Monomial next;
        size_t i = 0;
        for (auto& [v, e] : m) {
            while (i < g.size() && g[i].first < v) ++i;
            if (i < g.size() && g[i].first == v)
                next.push_back({v, std::min(g[i].second, e)});
        }
        g = next;
        if (g.empty()) break;
    }
    return Poly::term(g, Rat(1));
}

namespace detail {

// coefficient of x^k when p is read as a univariate polynomial in x
inline Poly coeff_in(const Poly& p, Var x, int k) {
    Poly r;
    for (auto& [m, c] : p.terms()) {
        int e = 0;
        Monomial rest;
        for (auto& [w, d] : m)
            if (w == x) e = d;
            else rest.push_back({w, d});
        if (e == k) r += Poly::term(rest, c);
    }
    return r;
}

inline Poly mono_pow_var(Var x, int e) {
    if (e == 0) return Poly::one();
    return Poly::term({{x, e}}, Rat(1));
}

inline Poly pseudo_rem(const Poly& a, const Poly& b, Var x) {
    int db = b.degree_in(x);
    Poly lb = coeff_in(b, x, db);
    Poly r = a;
    while (!r.is_zero() && r.degree_in(x) >= db) {
        int dr = r.degree_in(x);
        Poly lr = coeff_in(r, x, dr);
        r = lb * r - lr * b * mono_pow_var(x, dr - db);
    }
    return r;
}

}  // namespace detail

// the positive-or-negative rational s such that p*s has integer coprime
// coefficients and a positive first term (in print order)
inline Rat poly_normal_scale(const Poly& p) {
    if (p.is_zero()) return Rat(1);
    Int den_lcm = 1, num_gcd = 0;
    for (auto& [m, c] : p.terms())
        den_lcm = boost::multiprecision::lcm(den_lcm, rat_den(c));
    for (auto& [m, c] : p.terms())
        num_gcd = boost::multiprecision::gcd(
            num_gcd, boost::multiprecision::abs(rat_num(c) * (den_lcm / rat_den(c))));
    Rat scale(den_lcm, num_gcd);
    if (p.terms().begin()->second < 0) scale = -scale;
    return scale;
}

inline Poly poly_normalize(const Poly& p) { return p * poly_normal_scale(p); }

// content of p as a univariate polynomial in x (gcd of its coefficients)
inline Poly poly_gcd(const Poly& a, const Poly& b);

namespace detail {

inline Poly content_in(const Poly& p, Var x) {
    Poly c;
    for (int k = 0; k <= p.degree_in(x); ++k) {
        Poly ck = coeff_in(p, x, k);
        if (!ck.is_zero()) c = poly_gcd(c, ck);
    }
    return c;
}

}  // namespace detail

inline Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return poly_normalize(b);
    if (b.is_zero()) return poly_normalize(a);
    if (a.is_constant() || b.is_constant()) return Poly::one();

    std::set<Var> vs = a.vars();
    for (Var v : b.vars()) vs.insert(v);
    Var x = *vs.rbegin();

    int da = a.degree_in(x), db = b.degree_in(x);
    if (da == 0) return poly_gcd(a, detail::content_in(b, x));
    if (db == 0) return poly_gcd(detail::content_in(a, x), b);

    Poly ca = detail::content_in(a, x), cb = detail::content_in(b, x);
    Poly pa = *divide_exact(a, ca), pb = *divide_exact(b, cb);
    Poly c = poly_gcd(ca, cb);

    Poly p0 = da >= db ? pa : pb, p1 = da >= db ? pb : pa;
    while (!p1.is_zero()) {
        Poly r = detail::pseudo_rem(p0, p1, x);
        if (!r.is_zero()) {
            Poly rc = detail::content_in(r, x);
            r = *divide_exact(r, rc);
        }
        p0 = p1;
        p1 = r;
    }
    if (p0.degree_in(x) > 0) {
        Poly pc = detail::content_in(p0, x);
        p0 = *divide_exact(p0, pc);
    } else {
        p0 = Poly::one();
    }
    return poly_normalize(c * p0);
}

}  // namespace moduli
