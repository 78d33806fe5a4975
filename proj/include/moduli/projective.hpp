// Points and lines of P^2 with coordinates in an arbitrary exact commutative
// ring (rationals for sampled configurations, polynomials for chart models).
// Everything is expressed through determinants, the join/meet cross products
// and the incidence pairing; projective equality is the vanishing of all 2x2
// minors, so the zero vector is equal to nothing.
#pragma once

#include <moduli/poly.hpp>

#include <array>
#include <vector>

namespace moduli {

template <class T>
struct P3 {
    T x{}, y{}, z{};
    friend bool operator==(const P3&, const P3&) = default;
};

template <class T>
struct L3 {
    T a{}, b{}, c{};
    friend bool operator==(const L3&, const L3&) = default;
};

namespace detail {
inline bool ring_zero(const Rat& v) { return v == 0; }
inline bool ring_zero(const Poly& p) { return p.is_zero(); }
}  // namespace detail

template <class T>
T det3(const P3<T>& p, const P3<T>& q, const P3<T>& r) {
    return p.x * (q.y * r.z - q.z * r.y) - p.y * (q.x * r.z - q.z * r.x) +
           p.z * (q.x * r.y - q.y * r.x);
}

template <class T>
L3<T> join(const P3<T>& p, const P3<T>& q) {
    return {p.y * q.z - p.z * q.y, p.z * q.x - p.x * q.z, p.x * q.y - p.y * q.x};
}

template <class T>
P3<T> meet(const L3<T>& l, const L3<T>& m) {
    return {l.b * m.c - l.c * m.b, l.c * m.a - l.a * m.c, l.a * m.b - l.b * m.a};
}

template <class T>
T pairing(const L3<T>& l, const P3<T>& p) {
    return l.a * p.x + l.b * p.y + l.c * p.z;
}

template <class T>
bool is_zero_vec(const P3<T>& p) {
    return detail::ring_zero(p.x) && detail::ring_zero(p.y) && detail::ring_zero(p.z);
}

template <class T>
bool is_zero_vec(const L3<T>& l) {
    return detail::ring_zero(l.a) && detail::ring_zero(l.b) && detail::ring_zero(l.c);
}

template <class T>
bool proj_eq(const P3<T>& p, const P3<T>& q) {
    if (is_zero_vec(p) || is_zero_vec(q)) return false;
    return detail::ring_zero(p.x * q.y - p.y * q.x) &&
           detail::ring_zero(p.y * q.z - p.z * q.y) &&
           detail::ring_zero(p.x * q.z - p.z * q.x);
}

template <class T>
bool proj_eq(const L3<T>& p, const L3<T>& q) {
    if (is_zero_vec(p) || is_zero_vec(q)) return false;
    return detail::ring_zero(p.a * q.b - p.b * q.a) &&
           detail::ring_zero(p.b * q.c - p.c * q.b) &&
           detail::ring_zero(p.a * q.c - p.c * q.a);
}

// no two coincident, no three collinear
template <class T>
bool points_in_general_position(const std::vector<P3<T>>& ps) {
    for (size_t i = 0; i < ps.size(); ++i) {
        if (is_zero_vec(ps[i])) return false;
        for (size_t j = i + 1; j < ps.size(); ++j) {
            if (proj_eq(ps[i], ps[j])) return false;
            for (size_t k = j + 1; k < ps.size(); ++k)
                if (detail::ring_zero(det3(ps[i], ps[j], ps[k]))) return false;
        }
    }
    return true;
}

// no two coincident, no three concurrent
template <class T>
bool lines_in_general_position(const std::vector<L3<T>>& ls) {
    for (size_t i = 0; i < ls.size(); ++i) {
        if (is_zero_vec(ls[i])) return false;
        for (size_t j = i + 1; j < ls.size(); ++j) {
            if (proj_eq(ls[i], ls[j])) return false;
            for (size_t k = j + 1; k < ls.size(); ++k) {
                P3<T> p{ls[i].a, ls[i].b, ls[i].c};
                P3<T> q{ls[j].a, ls[j].b, ls[j].c};
                P3<T> r{ls[k].a, ls[k].b, ls[k].c};
                if (detail::ring_zero(det3(p, q, r))) return false;
            }
        }
    }
    return true;
}

}  // namespace moduli
