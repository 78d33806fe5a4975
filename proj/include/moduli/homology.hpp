// Transport counting on P^2.  A transport problem prescribes eight incidence
// conditions on an unknown 3x3 matrix M: a point->point condition asks M to
// carry a source point to a target point (two linear equations once the
// proportionality scale is eliminated), a point->line condition asks the image
// of a source point to land on a target line (one linear equation).  The
// conditions assemble into an 8x9 system over the rationals; for generic data
// it has rank 8, its kernel is a line, and the kernel generator is an
// invertible matrix, so exactly one projective transformation satisfies the
// prescription.  The trial driver samples random rational instances of each
// admissible condition pattern, rejects the non-transversal draws on an exact
// rank test, and certifies the count of one on every accepted instance.
#pragma once

#include <moduli/errors.hpp>
#include <moduli/projective.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace moduli {

struct ConditionPattern {
    int beta_count = 0;   // point->point conditions, two equations each
    int alpha_count = 0;  // point->line conditions, one equation each
    friend bool operator==(const ConditionPattern&,
                           const ConditionPattern&) = default;
};

// every way to fill the eight equation slots, from all-points to all-lines
inline const std::array<ConditionPattern, 5>& condition_patterns() {
    static const std::array<ConditionPattern, 5> k{
        {{4, 0}, {3, 2}, {2, 4}, {1, 6}, {0, 8}}};
    return k;
}

inline void validate_pattern(const ConditionPattern& pat) {
    if (pat.beta_count < 0 || pat.alpha_count < 0 ||
        2 * pat.beta_count + pat.alpha_count != 8)
        throw PatternMismatch(
            "condition pattern must fill eight equation slots, got " +
            std::to_string(pat.beta_count) + " point->point and " +
            std::to_string(pat.alpha_count) + " point->line conditions");
}

inline std::string pattern_label(const ConditionPattern& pat) {
    std::string out;
    if (pat.beta_count)
        out += std::to_string(pat.beta_count) + "x(point->point)";
    if (pat.beta_count && pat.alpha_count) out += " + ";
    if (pat.alpha_count)
        out += std::to_string(pat.alpha_count) + "x(point->line)";
    return out;
}

struct PointCondition {
    P3<Rat> source, target;
};

struct LineCondition {
    P3<Rat> source;
    L3<Rat> line;
};

struct TransportProblem {
    ConditionPattern pattern;
    std::vector<PointCondition> point_conditions;
    std::vector<LineCondition> line_conditions;
};

// matrix entries in row-major reading order, M[3*i + j] acting on column j
inline P3<Rat> transport_apply(const std::array<Rat, 9>& m, const P3<Rat>& p) {
    return {m[0] * p.x + m[1] * p.y + m[2] * p.z,
            m[3] * p.x + m[4] * p.y + m[5] * p.z,
            m[6] * p.x + m[7] * p.y + m[8] * p.z};
}

inline Rat transport_det(const std::array<Rat, 9>& m) {
    P3<Rat> r0{m[0], m[1], m[2]}, r1{m[3], m[4], m[5]}, r2{m[6], m[7], m[8]};
    return det3(r0, r1, r2);
}

// M p ~ q is the vanishing of the cross product; with k the first nonzero
// coordinate of q, the two equations (M p)_i q_k - (M p)_k q_i = 0 for the
// remaining indices i imply the third, so they capture the condition exactly
inline std::vector<std::array<Rat, 9>> build_system(
    const TransportProblem& prob) {
    validate_pattern(prob.pattern);
    if (static_cast<int>(prob.point_conditions.size()) !=
            prob.pattern.beta_count ||
        static_cast<int>(prob.line_conditions.size()) !=
            prob.pattern.alpha_count)
        throw PatternMismatch(
            "problem holds " + std::to_string(prob.point_conditions.size()) +
            " point->point and " + std::to_string(prob.line_conditions.size()) +
            " point->line conditions, pattern wants " +
            std::to_string(prob.pattern.beta_count) + " and " +
            std::to_string(prob.pattern.alpha_count));

    std::vector<std::array<Rat, 9>> rows;
    for (const PointCondition& pc : prob.point_conditions) {
        if (is_zero_vec(pc.source) || is_zero_vec(pc.target))
            throw NonGenericData("point->point condition on the zero vector");
        const std::array<Rat, 3> p{pc.source.x, pc.source.y, pc.source.z};
        const std::array<Rat, 3> q{pc.target.x, pc.target.y, pc.target.z};
        int k = q[0] != 0 ? 0 : q[1] != 0 ? 1 : 2;
        for (int i = 0; i < 3; ++i) {
            if (i == k) continue;
            std::array<Rat, 9> row{};
            for (int j = 0; j < 3; ++j) {
                row[3 * i + j] += p[j] * q[k];
                row[3 * k + j] -= p[j] * q[i];
            }
            rows.push_back(std::move(row));
        }
    }
    for (const LineCondition& lc : prob.line_conditions) {
        if (is_zero_vec(lc.source) || is_zero_vec(lc.line))
            throw NonGenericData("point->line condition on the zero vector");
        const std::array<Rat, 3> p{lc.source.x, lc.source.y, lc.source.z};
        const std::array<Rat, 3> l{lc.line.a, lc.line.b, lc.line.c};
        std::array<Rat, 9> row{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) row[3 * i + j] = l[i] * p[j];
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace detail {

// reduced row echelon form in place; returns the pivot column of each row
inline std::vector<int> rref(std::vector<std::array<Rat, 9>>& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < 9 && r < static_cast<int>(m.size()); ++c) {
        int piv = -1;
        for (int i = r; i < static_cast<int>(m.size()); ++i)
            if (m[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        const Rat lead = m[r][c];
        for (Rat& v : m[r]) v /= lead;
        for (int i = 0; i < static_cast<int>(m.size()); ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rat f = m[i][c];
            for (int j = 0; j < 9; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline void normalize_transport(std::array<Rat, 9>& m) {
    Int den_lcm = 1, num_gcd = 0;
    for (const Rat& v : m) den_lcm = boost::multiprecision::lcm(den_lcm, rat_den(v));
    for (const Rat& v : m)
        num_gcd = boost::multiprecision::gcd(
            num_gcd,
            boost::multiprecision::abs(rat_num(v) * (den_lcm / rat_den(v))));
    if (num_gcd == 0) return;
    Rat scale(den_lcm, num_gcd);
    for (const Rat& v : m)
        if (v != 0) {
            if (v * scale < 0) scale = -scale;
            break;
        }
    for (Rat& v : m) v *= scale;
}

}  // namespace detail

// generator of the kernel line of the 8x9 system, scaled to coprime integers
inline std::array<Rat, 9> kernel_generator(const TransportProblem& prob) {
    std::vector<std::array<Rat, 9>> m = build_system(prob);
    std::vector<int> pivots = detail::rref(m);
    if (pivots.size() < 8)
        throw NonGenericData("transport system has rank " +
                             std::to_string(pivots.size()) +
                             ", conditions are not transversal");
    std::array<bool, 9> is_pivot{};
    for (int c : pivots) is_pivot[c] = true;
    int free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    std::array<Rat, 9> gen{};
    gen[free_col] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) gen[pivots[r]] = -m[r][free_col];
    detail::normalize_transport(gen);
    return gen;
}

inline bool satisfies_conditions(const TransportProblem& prob,
                                 const std::array<Rat, 9>& m) {
    for (const PointCondition& pc : prob.point_conditions)
        if (!proj_eq(transport_apply(m, pc.source), pc.target)) return false;
    for (const LineCondition& lc : prob.line_conditions)
        if (pairing(lc.line, transport_apply(m, lc.source)) != 0) return false;
    return true;
}

// 1 when the conditions pin a unique invertible transformation, 0 when the
// pinned matrix is singular; non-transversal data is an error, not a count
inline int coefficient(const TransportProblem& prob) {
    return transport_det(kernel_generator(prob)) != 0 ? 1 : 0;
}

class TransportSampler {
  public:
    TransportSampler(std::uint64_t seed, int bound = 97)
        : rng_(seed), dist_(-bound, bound) {}

    P3<Rat> draw_point() {
        for (;;) {
            P3<Rat> p{Rat(dist_(rng_)), Rat(dist_(rng_)), Rat(dist_(rng_))};
            if (!is_zero_vec(p)) return p;
        }
    }

    L3<Rat> draw_line() {
        for (;;) {
            L3<Rat> l{Rat(dist_(rng_)), Rat(dist_(rng_)), Rat(dist_(rng_))};
            if (!is_zero_vec(l)) return l;
        }
    }

    TransportProblem draw(const ConditionPattern& pat) {
        validate_pattern(pat);
        TransportProblem prob;
        prob.pattern = pat;
        for (int i = 0; i < pat.beta_count; ++i)
            prob.point_conditions.push_back({draw_point(), draw_point()});
        for (int i = 0; i < pat.alpha_count; ++i)
            prob.line_conditions.push_back({draw_point(), draw_line()});
        return prob;
    }

  private:
    std::mt19937_64 rng_;
    std::uniform_int_distribution<int> dist_;
};

struct PatternTrialReport {
    ConditionPattern pattern;
    int accepted = 0;
    int rejected = 0;
    int coefficient_one = 0;
    bool generators_certified = true;

    bool all_one() const { return coefficient_one == accepted; }
    double rejection_rate() const {
        int total = accepted + rejected;
        return total ? static_cast<double>(rejected) / total : 0.0;
    }
};

inline PatternTrialReport run_pattern_trials(const ConditionPattern& pat,
                                             int trials, std::uint64_t seed,
                                             int bound = 97) {
    PatternTrialReport rep;
    rep.pattern = pat;
    TransportSampler sampler(seed, bound);
    while (rep.accepted < trials) {
        TransportProblem prob = sampler.draw(pat);
        std::array<Rat, 9> gen;
        try {
            gen = kernel_generator(prob);
        } catch (const NonGenericData&) {
            ++rep.rejected;
            continue;
        }
        ++rep.accepted;
        rep.generators_certified =
            rep.generators_certified && satisfies_conditions(prob, gen);
        if (transport_det(gen) != 0) ++rep.coefficient_one;
    }
    return rep;
}

}  // namespace moduli
