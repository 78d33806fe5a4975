// Projective invariants of marked configurations in P^2.
//
// Numeric routines work over Q and return P^1(Q) values, so degenerate
// positions produce 0, inf or the in-band undefined value instead of
// exceptions wherever the formulas themselves stay meaningful.
//
// Symbolic routines work over the polynomial ring of a chart.  A value is a
// projective pair (num : den) of polynomials.  Pencil legs and cevians can be
// replaced by declared lines (the recorded limit lines of a degenerating
// configuration); a declared line always wins over the span of the two
// points, with a diagnostic note when the two differ away from the base
// point.  Common polynomial factors of the two sides are cancelled: every
// side is a product of chart determinants, and a factor vanishing at the base
// point but shared by both sides carries no information about the germ, while
// leaving it in place would silently zero out every linearization row
// computed from the value.
#pragma once

#include <moduli/errors.hpp>
#include <moduli/projective.hpp>
#include <moduli/ratfunc.hpp>

#include <optional>

namespace moduli {

// ---------------------------------------------------------------- numeric --

// [A,B;C,D]_E through the determinant form
inline ExtScalar ext_cross_ratio_pencil(const P3<Rat>& a, const P3<Rat>& b,
                                        const P3<Rat>& c, const P3<Rat>& d,
                                        const P3<Rat>& e) {
    return ExtScalar::from_pair(det3(a, c, e) * det3(b, d, e),
                                det3(b, c, e) * det3(a, d, e));
}

// [A,B;C,D] for four collinear points, anchored at a coordinate point off
// their common line
inline ExtScalar ext_cross_ratio_collinear(const P3<Rat>& a, const P3<Rat>& b,
                                           const P3<Rat>& c, const P3<Rat>& d) {
    L3<Rat> l = join(a, b);
    if (is_zero_vec(l))
        throw EqualPoints("collinear cross-ratio: first two points coincide");
    if (pairing(l, c) != 0 || pairing(l, d) != 0)
        throw NotCollinear("collinear cross-ratio: arguments not on one line");
    const P3<Rat> frame[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (auto& o : frame)
        if (det3(a, b, o) != 0) return ext_cross_ratio_pencil(a, b, c, d, o);
    throw EqualPoints("collinear cross-ratio: no anchor found");
}

namespace detail {

template <class T>
struct TripleFeet {
    P3<T> p, q, r;  // on sides BC, CA, AB respectively
};

template <class T, class Cev>
TripleFeet<T> triple_feet(const P3<T>& a, const P3<T>& b, const P3<T>& c,
                          Cev&& cevian_line) {
    L3<T> bc = join(b, c), ca = join(c, a), ab = join(a, b);
    return {meet(cevian_line(0), bc), meet(cevian_line(1), ca),
            meet(cevian_line(2), ab)};
}

}  // namespace detail

// {A,B,C;P,Q,R} via cevian feet: P'=AP^BC, Q'=BQ^CA, R'=CR^AB and the signed
// ratio on each side measured against the opposite vertex
inline ExtScalar ext_triple_ratio_cevian(const P3<Rat>& a, const P3<Rat>& b,
                                         const P3<Rat>& c, const P3<Rat>& p,
                                         const P3<Rat>& q, const P3<Rat>& r) {
    if (det3(a, b, c) == 0)
        throw DegenerateTriangle("triple ratio: A,B,C collinear");
    L3<Rat> cev[3] = {join(a, p), join(b, q), join(c, r)};
    for (auto& l : cev)
        if (is_zero_vec(l))
            throw EqualPoints("triple ratio: cevian endpoints coincide");
    auto feet = detail::triple_feet<Rat>(a, b, c, [&](int i) { return cev[i]; });
    Rat n = det3(a, feet.r, c) * det3(b, feet.p, a) * det3(c, feet.q, b);
    Rat d = det3(feet.r, b, c) * det3(feet.p, c, a) * det3(feet.q, a, b);
    return ExtScalar::from_pair(n, d);
}

// {A,B,C;P,Q,R} via a transversal t: with X=t^BC, Y=t^CA, Z=t^AB the value is
// -[A,B;R',Z]*[B,C;P',X]*[C,A;Q',Y], each factor a collinear cross-ratio
inline ExtScalar ext_triple_ratio_menelaus(const P3<Rat>& a, const P3<Rat>& b,
                                           const P3<Rat>& c, const P3<Rat>& p,
                                           const P3<Rat>& q, const P3<Rat>& r,
                                           const L3<Rat>& t) {
    if (det3(a, b, c) == 0)
        throw DegenerateTriangle("triple ratio: A,B,C collinear");
    if (pairing(t, a) == 0 || pairing(t, b) == 0 || pairing(t, c) == 0)
        throw BadTransversal("triple ratio: transversal through a vertex");
    L3<Rat> cev[3] = {join(a, p), join(b, q), join(c, r)};
    for (auto& l : cev)
        if (is_zero_vec(l))
            throw EqualPoints("triple ratio: cevian endpoints coincide");
    auto feet = detail::triple_feet<Rat>(a, b, c, [&](int i) { return cev[i]; });
    L3<Rat> bc = join(b, c), ca = join(c, a), ab = join(a, b);
    P3<Rat> x = meet(t, bc), y = meet(t, ca), z = meet(t, ab);
    ExtScalar c1 = ext_cross_ratio_collinear(a, b, feet.r, z);
    ExtScalar c2 = ext_cross_ratio_collinear(b, c, feet.p, x);
    ExtScalar c3 = ext_cross_ratio_collinear(c, a, feet.q, y);
    return ext_neg(ext_mul(ext_mul(c1, c2), c3));
}

// --------------------------------------------------------------- symbolic --

// projective pair of polynomials; den may be identically zero (value inf)
struct SymPair {
    Poly num, den;
};

inline void normalize_sym_pair(SymPair& v) {
    const Poly& anchor = v.den.is_zero() ? v.num : v.den;
    if (anchor.is_zero()) return;
    Int den_lcm = 1, num_gcd = 0;
    for (const Poly* p : {&v.num, &v.den})
        for (auto& [m, c] : p->terms())
            den_lcm = boost::multiprecision::lcm(den_lcm, rat_den(c));
    for (const Poly* p : {&v.num, &v.den})
        for (auto& [m, c] : p->terms())
            num_gcd = boost::multiprecision::gcd(
                num_gcd,
                boost::multiprecision::abs(rat_num(c) * (den_lcm / rat_den(c))));
    Rat scale(den_lcm, num_gcd);
    if (anchor.terms().begin()->second * scale < 0) scale = -scale;
    v.num = v.num * scale;
    v.den = v.den * scale;
}

// assemble (prod nums : prod dens), cancelling factors shared across sides;
// pairwise coprimality of the factors gives coprimality of the products
inline SymPair make_sym_value(std::vector<Poly> nums, std::vector<Poly> dens,
                              const std::string& ctx) {
    bool num_zero = false, den_zero = false;
    for (auto& n : nums) num_zero |= n.is_zero();
    for (auto& d : dens) den_zero |= d.is_zero();
    if (num_zero && den_zero)
        throw NonGenericData(ctx + ": value is identically 0:0");
    if (num_zero) return {Poly::zero(), Poly::one()};
    if (den_zero) return {Poly::one(), Poly::zero()};
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& n : nums)
            for (auto& d : dens) {
                Poly g = poly_gcd(n, d);
                if (!g.is_constant()) {
                    n = *divide_exact(n, g);
                    d = *divide_exact(d, g);
                    changed = true;
                }
            }
    }
    SymPair v{Poly::one(), Poly::one()};
    for (auto& n : nums) v.num *= n;
    for (auto& d : dens) v.den *= d;
    normalize_sym_pair(v);
    return v;
}

namespace detail {

inline L3<Poly> resolve_leg(const P3<Poly>& x, const P3<Poly>& anchor,
                            const std::optional<L3<Poly>>& declared,
                            std::vector<std::string>* notes,
                            const std::string& ctx, const std::string& leg) {
    L3<Poly> j = join(x, anchor);
    if (declared) {
        if (!is_zero_vec(j) && !proj_eq(*declared, j) && notes)
            notes->push_back(ctx + ": declared line for " + leg +
                             " differs from the point span away from the base "
                             "point; declared line used");
        return *declared;
    }
    if (is_zero_vec(j))
        throw MissingLine(ctx + ": " + leg +
                          " spans no line (coincident points) and no line is "
                          "declared");
    return j;
}

}  // namespace detail

// [A,B;C,D]_E with optional declared lines for the two pencil legs (A,E) and
// (B,E); value is ( <l_A,C> * <l_B,D> : <l_B,C> * <l_A,D> ), in which each
// leg line occurs once on each side, so its scale cancels
inline SymPair sym_cross_ratio_pencil(
    const P3<Poly>& a, const P3<Poly>& b, const P3<Poly>& c, const P3<Poly>& d,
    const P3<Poly>& e, const std::optional<L3<Poly>>& decl_a,
    const std::optional<L3<Poly>>& decl_b, std::vector<std::string>* notes,
    const std::string& ctx) {
    L3<Poly> la = detail::resolve_leg(a, e, decl_a, notes, ctx, "leg 1");
    L3<Poly> lb = detail::resolve_leg(b, e, decl_b, notes, ctx, "leg 2");
    return make_sym_value({pairing(la, c), pairing(lb, d)},
                          {pairing(lb, c), pairing(la, d)}, ctx);
}

// {A,B,C;P,Q,R} with optional declared cevian lines for (A,P), (B,Q), (C,R)
inline SymPair sym_triple_ratio(
    const P3<Poly>& a, const P3<Poly>& b, const P3<Poly>& c, const P3<Poly>& p,
    const P3<Poly>& q, const P3<Poly>& r,
    const std::optional<L3<Poly>>& decl_ap,
    const std::optional<L3<Poly>>& decl_bq,
    const std::optional<L3<Poly>>& decl_cr, std::vector<std::string>* notes,
    const std::string& ctx) {
    if (det3(a, b, c).is_zero())
        throw DegenerateTriangle(ctx + ": triangle identically collinear");
    L3<Poly> ap = detail::resolve_leg(p, a, decl_ap, notes, ctx, "cevian 1");
    L3<Poly> bq = detail::resolve_leg(q, b, decl_bq, notes, ctx, "cevian 2");
    L3<Poly> cr = detail::resolve_leg(r, c, decl_cr, notes, ctx, "cevian 3");
    L3<Poly> cev[3] = {ap, bq, cr};
    auto feet =
        detail::triple_feet<Poly>(a, b, c, [&](int i) { return cev[i]; });
    return make_sym_value(
        {det3(a, feet.r, c), det3(b, feet.p, a), det3(c, feet.q, b)},
        {det3(feet.r, b, c), det3(feet.p, c, a), det3(feet.q, a, b)}, ctx);
}

inline bool sym_pair_matches(const SymPair& v, const RatFunc& f) {
    return v.num * f.den() == f.num() * v.den;
}

inline bool sym_pair_matches(const SymPair& v, const SymPair& w) {
    return v.num * w.den == w.num * v.den;
}

}  // namespace moduli
