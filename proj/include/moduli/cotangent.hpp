// Symbolic cotangent-space computation for a chart atlas.  Every relation
// between chart expressions of the same invariant is turned into one linear
// row over the differentials of all chart variables; the corank of the
// resulting matrix is the dimension of the cotangent space at the point the
// atlas describes.  Relations whose two sides disagree at the base point are
// consumed as parameter constraints (the parameter is solved for and
// substituted everywhere) but still contribute their differential row.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chart.hpp"

namespace moduli {

namespace detail {

inline Poly poly_lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly::zero();
    return poly_normalize(*divide_exact(a, poly_gcd(a, b)) * b);
}

}  // namespace detail

// substitutes rational functions for variables in a polynomial
inline RatFunc subst_all(const Poly& p, const std::map<Var, RatFunc>& sub) {
    std::optional<Var> hit;
    for (Var w : p.vars())
        if (sub.count(w)) {
            hit = w;
            break;
        }
    if (!hit) return RatFunc(p);
    const RatFunc& r = sub.at(*hit);
    RatFunc out;
    RatFunc pw{Poly::one(), Poly::one()};
    for (int k = 0; k <= p.degree_in(*hit); ++k) {
        out = out + subst_all(detail::coeff_in(p, *hit, k), sub) * pw;
        pw = pw * r;
    }
    return out;
}

struct PivotCert {
    std::string context;
    Poly value;
    std::map<Var, Rat> sample;
    Rat sample_value;
};

// draws admissible parameter values and certifies that polynomials in the
// parameters do not vanish identically on the admissible locus
class ParamSampler {
  public:
    ParamSampler(std::map<Var, VarClass> classes, std::uint64_t seed)
        : classes_(std::move(classes)), rng_(seed) {}

    Rat draw_value(VarClass c, int bound) {
        std::uniform_int_distribution<int> d(-bound, bound);
        for (;;) {
            int v = d(rng_);
            if (v == 0 && c != VarClass::Free) continue;
            if (v == 1 && c == VarClass::GenericParam) continue;
            return Rat(v);
        }
    }

    std::map<Var, Rat> draw(const std::set<Var>& vars, int bound = 97) {
        std::map<Var, Rat> out;
        for (Var v : vars) out[v] = draw_value(class_of(v), bound);
        return out;
    }

    PivotCert certify(const Poly& q, const std::string& context) {
        if (q.is_zero())
            throw PivotUncertifiable(context + ": identically zero");
        PivotCert cert;
        cert.context = context;
        cert.value = q;
        std::set<Var> vs = q.vars();
        for (int attempt = 0; attempt < 64; ++attempt) {
            std::map<Var, Rat> at = draw(vs);
            Rat val = q.eval(at);
            if (val != 0) {
                cert.sample = std::move(at);
                cert.sample_value = val;
                return cert;
            }
        }
        throw PivotUncertifiable(context + ": no admissible sample found for " +
                                 q.str());
    }

    VarClass class_of(Var v) const {
        auto it = classes_.find(v);
        return it == classes_.end() ? VarClass::Free : it->second;
    }

    const std::map<Var, VarClass>& classes() const { return classes_; }

  private:
    std::map<Var, VarClass> classes_;
    std::mt19937_64 rng_;
};

struct CotangentRow {
    std::string rel_id;
    std::vector<Poly> entries;
    bool constraint = false;
    std::optional<Var> solved;
};

struct RankResult {
    int rank = 0;
    std::vector<PivotCert> pivots;
};

// fraction-free Bareiss elimination with full pivoting; pivots are chosen by
// minimal total degree, then leftmost column, then topmost row, and each one
// is certified nonzero at an admissible parameter sample
inline RankResult poly_matrix_rank(std::vector<std::vector<Poly>> m,
                                   ParamSampler& sampler,
                                   const std::string& context) {
    RankResult res;
    const int nr = static_cast<int>(m.size());
    if (nr == 0) return res;
    const int nc = static_cast<int>(m[0].size());
    std::vector<int> col(nc);
    for (int j = 0; j < nc; ++j) col[j] = j;
    Poly prev = Poly::one();
    for (int step = 0; step < nr && step < nc; ++step) {
        int pr = -1, pc = -1, best = -1;
        for (int j = step; j < nc; ++j)
            for (int i = step; i < nr; ++i) {
                const Poly& e = m[i][col[j]];
                if (e.is_zero()) continue;
                int d = e.total_degree();
                if (best < 0 || d < best) {
                    best = d;
                    pr = i;
                    pc = j;
                }
            }
        if (pr < 0) break;
        std::swap(m[step], m[pr]);
        std::swap(col[step], col[pc]);
        const Poly piv = m[step][col[step]];
        res.pivots.push_back(sampler.certify(
            piv, context + " pivot " + std::to_string(step + 1)));
        for (int i = step + 1; i < nr; ++i) {
            for (int j = step + 1; j < nc; ++j) {
                Poly t = m[i][col[j]] * piv - m[i][col[step]] * m[step][col[j]];
                m[i][col[j]] = *divide_exact(t, prev);
            }
            m[i][col[step]] = Poly::zero();
        }
        prev = piv;
        ++res.rank;
    }
    return res;
}

struct CotangentReport {
    std::string case_name;
    std::vector<Var> columns;
    std::map<Var, VarClass> classes;
    std::vector<CotangentRow> rows;
    std::map<Var, RatFunc> substitutions;
    std::vector<PivotCert> ledger;
    int rank = 0;
    int corank = 0;
    int expected_corank = 0;
    std::vector<Var> expected_span;
    bool corank_ok = false;
    bool span_ok = false;
    std::vector<std::string> notes;

    bool ok() const { return corank_ok && span_ok; }
};

namespace detail {

inline std::vector<std::vector<Poly>> row_matrix(
    const std::vector<CotangentRow>& rows, const std::set<size_t>& drop_cols) {
    std::vector<std::vector<Poly>> m;
    for (const CotangentRow& r : rows) {
        std::vector<Poly> row;
        for (size_t j = 0; j < r.entries.size(); ++j)
            if (!drop_cols.count(j)) row.push_back(r.entries[j]);
        m.push_back(std::move(row));
    }
    return m;
}

}  // namespace detail

inline CotangentReport cotangent_report(const CaseSpec& cs,
                                        std::uint64_t seed = 2026) {
    CotangentReport rep;
    rep.case_name = cs.name;
    rep.expected_corank = cs.expect_corank;
    rep.expected_span = cs.expect_span;

    std::set<Var> infs;
    for (const ChartModel& ch : cs.charts)
        for (auto& [v, c] : ch.vars) {
            rep.classes[v] = c;
            if (c == VarClass::Infinitesimal) infs.insert(v);
        }
    for (auto& [v, c] : rep.classes) rep.columns.push_back(v);
    ParamSampler sampler(rep.classes, seed);

    // first pass: cross-multiplied relation polynomials and the triangular
    // parameter substitution coming from relations that fail at the base
    struct Prepared {
        std::string id;
        Poly P;
        bool constraint = false;
        std::optional<Var> solved;
    };
    std::vector<Prepared> prep;
    std::map<Var, RatFunc> sub;
    auto retire = [&](Var v, RatFunc expr) {
        for (auto& [w, e] : sub) {
            std::map<Var, RatFunc> one{{v, expr}};
            RatFunc n = subst_all(e.num(), one);
            RatFunc d = subst_all(e.den(), one);
            e = n / d;
        }
        sub[v] = std::move(expr);
    };
    for (const RelDecl& rel : cs.rels) {
        SymPair lhs =
            chart_invariant(cs.chart(rel.lhs.chart), rel.lhs.inv, &rep.notes);
        Poly rn, rd;
        if (std::holds_alternative<RelSide>(rel.rhs)) {
            const RelSide& rs = std::get<RelSide>(rel.rhs);
            SymPair rv =
                chart_invariant(cs.chart(rs.chart), rs.inv, &rep.notes);
            rn = rv.num;
            rd = rv.den;
        } else {
            const RatFunc& f = std::get<RatFunc>(rel.rhs);
            rn = f.num();
            rd = f.den();
        }
        Prepared pr;
        pr.id = rel.id;
        pr.P = lhs.num * rd - rn * lhs.den;
        Poly base = pr.P.zero_out(infs);
        if (!base.is_zero()) {
            pr.constraint = true;
            RatFunc eff = subst_all(base, sub);
            if (eff.num().is_zero()) {
                rep.notes.push_back("rel " + rel.id +
                                    ": base constraint already implied");
            } else if (eff.num().is_constant()) {
                throw ConstantNonvanishing(
                    "rel " + rel.id + ": base value " + eff.num().str() +
                    " of " + base.str() + " cannot vanish");
            } else {
                const Poly q = eff.num();
                std::optional<Var> pick;
                for (Var v : q.vars()) {
                    if (q.degree_in(v) != 1) continue;
                    if (!pick) {
                        pick = v;
                        continue;
                    }
                    bool vf = sampler.class_of(v) == VarClass::Free;
                    bool pf = sampler.class_of(*pick) == VarClass::Free;
                    if (vf != pf) {
                        if (!vf) pick = v;
                    } else if (*pick < v) {
                        pick = v;
                    }
                }
                if (!pick)
                    throw NonGenericData("rel " + rel.id +
                                         ": base constraint " + q.str() +
                                         " is not linear in any parameter");
                Poly alpha = detail::coeff_in(q, *pick, 1);
                Poly beta = detail::coeff_in(q, *pick, 0);
                rep.ledger.push_back(sampler.certify(
                    alpha, "rel " + rel.id + " solving " + var_str(*pick)));
                RatFunc expr(-beta, alpha);
                if (expr.num().is_constant() && expr.den().is_constant()) {
                    Rat cv = expr.num().constant_value() /
                             expr.den().constant_value();
                    VarClass c = sampler.class_of(*pick);
                    if ((c == VarClass::NonzeroParam && cv == 0) ||
                        (c == VarClass::GenericParam && (cv == 0 || cv == 1)))
                        throw ConstantNonvanishing(
                            "rel " + rel.id + ": forces " + var_str(*pick) +
                            " = " + expr.str() +
                            ", outside its declared class");
                }
                rep.notes.push_back("rel " + rel.id + ": solved " +
                                    var_str(*pick) + " = " + expr.str());
                retire(*pick, std::move(expr));
                pr.solved = *pick;
            }
        }
        prep.push_back(std::move(pr));
    }
    rep.substitutions = sub;

    // second pass: differential rows at the base point under the complete
    // substitution, with denominators cleared per row
    for (const Prepared& pr : prep) {
        std::vector<RatFunc> raw;
        Poly den = Poly::one();
        for (Var v : rep.columns) {
            RatFunc e = subst_all(pr.P.derivative(v).zero_out(infs), sub);
            den = detail::poly_lcm(den, e.den());
            raw.push_back(std::move(e));
        }
        CotangentRow row;
        row.rel_id = pr.id;
        row.constraint = pr.constraint;
        row.solved = pr.solved;
        Poly g;
        for (const RatFunc& e : raw) {
            Poly cleared = e.num() * *divide_exact(den, e.den());
            g = poly_gcd(g, cleared);
            row.entries.push_back(std::move(cleared));
        }
        if (!g.is_zero() && !g.is_constant())
            for (Poly& e : row.entries) e = *divide_exact(e, g);
        rep.rows.push_back(std::move(row));
    }

    RankResult rr = poly_matrix_rank(detail::row_matrix(rep.rows, {}), sampler,
                                     "case " + cs.name);
    for (PivotCert& c : rr.pivots) rep.ledger.push_back(std::move(c));
    rep.rank = rr.rank;
    rep.corank = static_cast<int>(rep.columns.size()) - rep.rank;
    rep.corank_ok = rep.corank == cs.expect_corank;

    // the declared span is a basis of the quotient iff its size matches the
    // corank and dropping those columns does not lower the rank
    if (static_cast<int>(cs.expect_span.size()) == rep.corank) {
        std::set<size_t> drop;
        for (Var v : cs.expect_span)
            for (size_t j = 0; j < rep.columns.size(); ++j)
                if (rep.columns[j] == v) drop.insert(j);
        RankResult sub_rr =
            poly_matrix_rank(detail::row_matrix(rep.rows, drop), sampler,
                             "case " + cs.name + " span check");
        for (PivotCert& c : sub_rr.pivots) rep.ledger.push_back(std::move(c));
        rep.span_ok = sub_rr.rank == rep.rank;
    }
    return rep;
}

// rank of the same rows at one exact parameter sample; agreement with the
// symbolic rank certifies the elimination did not divide by a vanishing pivot
inline int rank_at_sample(const std::vector<CotangentRow>& rows,
                          const std::map<Var, Rat>& at) {
    std::vector<std::vector<Rat>> m;
    for (const CotangentRow& r : rows) {
        std::vector<Rat> row;
        for (const Poly& e : r.entries) row.push_back(e.eval(at));
        m.push_back(std::move(row));
    }
    int rank = 0;
    const int nr = static_cast<int>(m.size());
    const int nc = nr ? static_cast<int>(m[0].size()) : 0;
    for (int c = 0, r = 0; c < nc && r < nr; ++c) {
        int piv = -1;
        for (int i = r; i < nr; ++i)
            if (m[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        for (int i = r + 1; i < nr; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[r][c];
            for (int j = c; j < nc; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

inline std::set<Var> row_vars(const std::vector<CotangentRow>& rows) {
    std::set<Var> out;
    for (const CotangentRow& r : rows)
        for (const Poly& e : r.entries)
            for (Var v : e.vars()) out.insert(v);
    return out;
}

// draws admissible samples until the sampled rank matches, with a bounded
// number of retries for samples that land on a non-generic hypersurface
inline bool sampled_rank_agrees(const CotangentReport& rep, int samples,
                                std::uint64_t seed) {
    ParamSampler sampler(rep.classes, seed);
    std::set<Var> vs = row_vars(rep.rows);
    for (int s = 0; s < samples; ++s) {
        bool hit = false;
        for (int attempt = 0; attempt < 16 && !hit; ++attempt)
            hit = rank_at_sample(rep.rows, sampler.draw(vs)) == rep.rank;
        if (!hit) return false;
    }
    return true;
}

}  // namespace moduli
