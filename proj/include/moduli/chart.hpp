#pragma once

#include <array>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <moduli/invariants.hpp>

namespace moduli {

enum class VarClass { Infinitesimal, NonzeroParam, GenericParam, Free };

inline const char* var_class_str(VarClass c) {
    switch (c) {
        case VarClass::Infinitesimal: return "inf";
        case VarClass::NonzeroParam: return "nonzero";
        case VarClass::GenericParam: return "generic";
        case VarClass::Free: return "free";
    }
    return "?";
}

inline VarClass parse_var_class(const std::string& s) {
    if (s == "inf") return VarClass::Infinitesimal;
    if (s == "nonzero") return VarClass::NonzeroParam;
    if (s == "generic") return VarClass::GenericParam;
    if (s == "free") return VarClass::Free;
    throw ParseError("unknown variable class '" + s + "'");
}

enum class FactKind { Zero, Inf, Undef, Nonzero };

inline const char* fact_kind_str(FactKind k) {
    switch (k) {
        case FactKind::Zero: return "zero";
        case FactKind::Inf: return "inf";
        case FactKind::Undef: return "undef";
        case FactKind::Nonzero: return "nonzero";
    }
    return "?";
}

inline FactKind parse_fact_kind(const std::string& s) {
    if (s == "zero") return FactKind::Zero;
    if (s == "inf") return FactKind::Inf;
    if (s == "undef") return FactKind::Undef;
    if (s == "nonzero") return FactKind::Nonzero;
    throw ParseError("unknown fact kind '" + s + "'");
}

constexpr int kMaxPoints = 6;

inline int point_index(char label) {
    if (label >= 'A' && label <= 'F') return label - 'A';
    if (label >= '1' && label <= '6') return label - '1';
    throw ParseError(std::string("bad point label '") + label + "'");
}

inline char point_label(int idx) { return static_cast<char>('A' + idx); }

// cross-ratio cr(P,Q;R,S|T) of the four lines TP,TQ,TR,TS in the pencil at
// T, or triple ratio tr(P,Q,R;S,T,U) of triangle P,Q,R with cevians through
// S,T,U
struct InvariantSpec {
    bool is_triple = false;
    std::array<int, 6> args{};

    int arity() const { return is_triple ? 6 : 5; }

    std::string str() const {
        std::string s;
        auto L = [&](int k) { return std::string(1, point_label(args[k])); };
        if (is_triple)
            s = "tr(" + L(0) + "," + L(1) + "," + L(2) + ";" + L(3) + "," +
                L(4) + "," + L(5) + ")";
        else
            s = "cr(" + L(0) + "," + L(1) + ";" + L(2) + "," + L(3) + "|" +
                L(4) + ")";
        return s;
    }

    static InvariantSpec parse(std::string_view text) {
        std::string s;
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
        InvariantSpec out;
        std::string shape;
        if (s.rfind("cr(", 0) == 0) {
            shape = ",;,|";
        } else if (s.rfind("tr(", 0) == 0) {
            out.is_triple = true;
            shape = ",,;,,";
        } else {
            throw ParseError("bad invariant '" + std::string(text) + "'");
        }
        size_t pos = 3;
        auto take = [&](char sep) {
            if (pos + 1 >= s.size() || s[pos + 1] != sep)
                throw ParseError("bad invariant '" + std::string(text) + "'");
            int idx = point_index(s[pos]);
            pos += 2;
            return idx;
        };
        for (size_t k = 0; k < shape.size(); ++k) out.args[k] = take(shape[k]);
        out.args[shape.size()] = take(')');
        if (pos != s.size())
            throw ParseError("bad invariant '" + std::string(text) + "'");
        return out;
    }

    friend bool operator==(const InvariantSpec&, const InvariantSpec&) =
        default;
};

struct ChartModel {
    int id = 0;
    bool line_stabilized = false;
    std::vector<std::pair<Var, VarClass>> vars;
    std::array<std::optional<P3<Poly>>, kMaxPoints> points;
    std::map<std::pair<int, int>, L3<Poly>> lines;

    const P3<Poly>& point(int idx) const {
        if (idx < 0 || idx >= kMaxPoints || !points[idx])
            throw NonGenericData(std::string("point ") + point_label(idx) +
                                 " not declared in chart " +
                                 std::to_string(id));
        return *points[idx];
    }

    std::optional<L3<Poly>> line_for(int i, int j) const {
        if (i > j) std::swap(i, j);
        auto it = lines.find({i, j});
        if (it == lines.end()) return std::nullopt;
        return it->second;
    }

    std::set<Var> infinitesimals() const {
        std::set<Var> out;
        for (auto& [v, c] : vars)
            if (c == VarClass::Infinitesimal) out.insert(v);
        return out;
    }

    std::set<Var> declared_vars() const {
        std::set<Var> out;
        for (auto& [v, c] : vars) out.insert(v);
        return out;
    }

    friend bool operator==(const ChartModel&, const ChartModel&) = default;
};

struct FactDecl {
    std::string id;
    InvariantSpec inv;
    FactKind kind = FactKind::Nonzero;
    friend bool operator==(const FactDecl&, const FactDecl&) = default;
};

struct RelSide {
    int chart = 0;
    InvariantSpec inv;
    friend bool operator==(const RelSide&, const RelSide&) = default;
};

struct RelDecl {
    std::string id;
    RelSide lhs;
    std::variant<RelSide, RatFunc> rhs;
    friend bool operator==(const RelDecl&, const RelDecl&) = default;
};

struct CaseSpec {
    std::string name;
    int expect_corank = 0;
    std::vector<Var> expect_span;
    std::vector<ChartModel> charts;
    std::vector<FactDecl> facts;
    std::vector<RelDecl> rels;

    const ChartModel& chart(int id) const {
        for (auto& ch : charts)
            if (ch.id == id) return ch;
        throw ParseError("chart " + std::to_string(id) + " not declared");
    }

    static CaseSpec parse(const std::string& text);
    std::string print() const;

    friend bool operator==(const CaseSpec&, const CaseSpec&) = default;
};

// --- evaluation ---

inline SymPair chart_invariant(const ChartModel& ch, const InvariantSpec& spec,
                               std::vector<std::string>* notes) {
    std::string ctx = "chart " + std::to_string(ch.id) + " " + spec.str();
    const auto& a = spec.args;
    if (spec.is_triple)
        return sym_triple_ratio(ch.point(a[0]), ch.point(a[1]), ch.point(a[2]),
                                ch.point(a[3]), ch.point(a[4]), ch.point(a[5]),
                                ch.line_for(a[0], a[3]),
                                ch.line_for(a[1], a[4]),
                                ch.line_for(a[2], a[5]), notes, ctx);
    return sym_cross_ratio_pencil(ch.point(a[0]), ch.point(a[1]),
                                  ch.point(a[2]), ch.point(a[3]),
                                  ch.point(a[4]), ch.line_for(a[0], a[4]),
                                  ch.line_for(a[1], a[4]), notes, ctx);
}

inline FactKind classify_at_base(const ChartModel& ch, const SymPair& v) {
    std::set<Var> infs = ch.infinitesimals();
    bool num_zero = v.num.zero_out(infs).is_zero();
    bool den_zero = v.den.zero_out(infs).is_zero();
    if (num_zero && den_zero) return FactKind::Undef;
    if (num_zero) return FactKind::Zero;
    if (den_zero) return FactKind::Inf;
    return FactKind::Nonzero;
}

// --- parsing ---

namespace detail {

inline std::string trim(std::string s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::array<Poly, 3> parse_triple(const std::string& text,
                                        const std::string& what) {
    std::string s = trim(text);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw ParseError("expected parenthesized triple in " + what);
    s = s.substr(1, s.size() - 2);
    std::vector<std::string> parts;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == ':' && depth == 0) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(s.substr(start));
    if (parts.size() != 3)
        throw ParseError("expected three coordinates in " + what);
    return {Poly::parse(parts[0]), Poly::parse(parts[1]),
            Poly::parse(parts[2])};
}

inline bool looks_like_rel_side(const std::string& rhs) {
    size_t i = 0;
    while (i < rhs.size() && std::isdigit(static_cast<unsigned char>(rhs[i])))
        ++i;
    return i > 0 && i < rhs.size() && rhs[i] == ':';
}

}  // namespace detail

inline CaseSpec CaseSpec::parse(const std::string& text) {
    CaseSpec cs;
    ChartModel* cur = nullptr;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    bool saw_case = false, saw_expect = false;
    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++lineno;
        if (size_t h = raw.find('#'); h != std::string::npos) raw.resize(h);
        std::string line = detail::trim(raw);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string keyword;
        ls >> keyword;
        std::string rest = detail::trim(line.substr(keyword.size()));

        if (keyword == "case") {
            if (saw_case) fail("duplicate case header");
            if (rest.empty() || rest.find(' ') != std::string::npos)
                fail("case name must be a single token");
            cs.name = rest;
            saw_case = true;
        } else if (keyword == "expect") {
            if (saw_expect) fail("duplicate expect header");
            std::istringstream es(rest);
            std::string w1, w2;
            if (!(es >> w1 >> cs.expect_corank >> w2) || w1 != "corank" ||
                w2 != "span" || cs.expect_corank < 0)
                fail("expected 'corank <n> span <vars>'");
            std::string tail;
            std::getline(es, tail);
            std::istringstream vs(tail);
            std::string tok;
            while (std::getline(vs, tok, ',')) {
                tok = detail::trim(tok);
                if (!tok.empty()) cs.expect_span.push_back(parse_var(tok));
            }
            saw_expect = true;
        } else if (keyword == "chart") {
            int id = 0;
            std::istringstream es(rest);
            if (!(es >> id) || id <= 0) fail("expected chart number");
            cs.charts.push_back(ChartModel{});
            cur = &cs.charts.back();
            cur->id = id;
        } else if (keyword == "flag") {
            if (!cur) fail("flag outside chart");
            if (rest != "line-stabilized") fail("unknown flag '" + rest + "'");
            cur->line_stabilized = true;
        } else if (keyword == "var") {
            if (!cur) fail("var outside chart");
            std::istringstream es(rest);
            std::string name, cls_kw, cls;
            if (!(es >> name >> cls_kw >> cls) || cls_kw != "class")
                fail("expected 'var <name> class <class>'");
            cur->vars.emplace_back(parse_var(name), parse_var_class(cls));
        } else if (keyword == "point") {
            if (!cur) fail("point outside chart");
            size_t eq = rest.find('=');
            if (eq == std::string::npos) fail("expected '=' in point");
            std::string label = detail::trim(rest.substr(0, eq));
            if (label.size() != 1) fail("bad point label '" + label + "'");
            int idx = point_index(label[0]);
            if (cur->points[idx]) fail("duplicate point " + label);
            auto t = detail::parse_triple(rest.substr(eq + 1), "point");
            cur->points[idx] = P3<Poly>{t[0], t[1], t[2]};
        } else if (keyword == "line") {
            if (!cur) fail("line outside chart");
            size_t eq = rest.find('=');
            if (eq == std::string::npos) fail("expected '=' in line");
            std::string key = detail::trim(rest.substr(0, eq));
            if (key.size() != 3 || key[1] != ',')
                fail("bad line endpoints '" + key + "'");
            int i = point_index(key[0]), j = point_index(key[2]);
            if (i == j) fail("line endpoints must differ");
            if (i > j) std::swap(i, j);
            if (cur->lines.count({i, j})) fail("duplicate line " + key);
            auto t = detail::parse_triple(rest.substr(eq + 1), "line");
            cur->lines[{i, j}] = L3<Poly>{t[0], t[1], t[2]};
        } else if (keyword == "fact") {
            size_t colon = rest.find(':');
            if (colon == std::string::npos) fail("expected ':' after fact id");
            FactDecl f;
            f.id = detail::trim(rest.substr(0, colon));
            if (f.id.empty()) fail("empty fact id");
            std::string body = rest.substr(colon + 1);
            size_t eq = body.rfind('=');
            if (eq == std::string::npos) fail("expected '=' in fact");
            f.inv = InvariantSpec::parse(detail::trim(body.substr(0, eq)));
            f.kind = parse_fact_kind(detail::trim(body.substr(eq + 1)));
            cs.facts.push_back(std::move(f));
        } else if (keyword == "rel") {
            size_t colon = rest.find(':');
            if (colon == std::string::npos) fail("expected ':' after rel id");
            RelDecl r;
            r.id = detail::trim(rest.substr(0, colon));
            if (r.id.empty()) fail("empty rel id");
            std::string body = rest.substr(colon + 1);
            size_t eq = body.find("==");
            if (eq == std::string::npos) fail("expected '==' in rel");
            auto parse_side = [&](const std::string& side) {
                size_t c = side.find(':');
                if (c == std::string::npos)
                    fail("expected '<chart>:<invariant>'");
                RelSide out;
                std::istringstream ss(side.substr(0, c));
                if (!(ss >> out.chart) || out.chart <= 0)
                    fail("bad chart number in relation side");
                out.inv = InvariantSpec::parse(side.substr(c + 1));
                return out;
            };
            r.lhs = parse_side(detail::trim(body.substr(0, eq)));
            std::string rhs = detail::trim(body.substr(eq + 2));
            if (detail::looks_like_rel_side(rhs))
                r.rhs = parse_side(rhs);
            else
                r.rhs = RatFunc::parse(rhs);
            cs.rels.push_back(std::move(r));
        } else {
            fail("unknown keyword '" + keyword + "'");
        }
    }
    if (!saw_case) throw ParseError("missing case header");
    if (!saw_expect) throw ParseError("missing expect header");
    return cs;
}

inline std::string CaseSpec::print() const {
    std::ostringstream out;
    out << "case " << name << "\n";
    out << "expect corank " << expect_corank << " span";
    for (size_t i = 0; i < expect_span.size(); ++i)
        out << (i ? ", " : " ") << var_str(expect_span[i]);
    out << "\n";
    for (const ChartModel& ch : charts) {
        out << "\nchart " << ch.id << "\n";
        if (ch.line_stabilized) out << "flag line-stabilized\n";
        for (auto& [v, c] : ch.vars)
            out << "var " << var_str(v) << " class " << var_class_str(c)
                << "\n";
        for (int i = 0; i < kMaxPoints; ++i)
            if (ch.points[i])
                out << "point " << point_label(i) << " = ("
                    << ch.points[i]->x.str() << " : " << ch.points[i]->y.str()
                    << " : " << ch.points[i]->z.str() << ")\n";
        for (auto& [key, l] : ch.lines)
            out << "line " << point_label(key.first) << ","
                << point_label(key.second) << " = (" << l.a.str() << " : "
                << l.b.str() << " : " << l.c.str() << ")\n";
    }
    if (!facts.empty() || !rels.empty()) out << "\n";
    for (const FactDecl& f : facts)
        out << "fact " << f.id << ": " << f.inv.str() << " = "
            << fact_kind_str(f.kind) << "\n";
    for (const RelDecl& r : rels) {
        out << "rel " << r.id << ": " << r.lhs.chart << ":" << r.lhs.inv.str()
            << " == ";
        if (std::holds_alternative<RelSide>(r.rhs)) {
            const RelSide& s = std::get<RelSide>(r.rhs);
            out << s.chart << ":" << s.inv.str();
        } else {
            const RatFunc& f = std::get<RatFunc>(r.rhs);
            out << "(" << f.num().str() << ")/(" << f.den().str() << ")";
        }
        out << "\n";
    }
    return out.str();
}

// --- validity ---

namespace detail {

inline void collect_vars(const Poly& p, std::set<Var>& out) {
    for (Var v : p.vars()) out.insert(v);
}

template <class Pred>
inline bool some_quadruple(int n, Pred&& good) {
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d)
                    if (good(a, b, c, d)) return true;
    return false;
}

// the line through two marked points, evaluated at the base point; common
// factors are removed before the evaluation so that points which collide at
// the base still contribute their limiting line
inline std::optional<L3<Poly>> base_limit_line(const P3<Poly>& p,
                                               const P3<Poly>& q,
                                               const std::set<Var>& infs) {
    L3<Poly> j = join(p, q);
    if (is_zero_vec(j)) return std::nullopt;
    Poly g = poly_gcd(poly_gcd(j.a, j.b), j.c);
    L3<Poly> out{divide_exact(j.a, g).value().zero_out(infs),
                 divide_exact(j.b, g).value().zero_out(infs),
                 divide_exact(j.c, g).value().zero_out(infs)};
    if (is_zero_vec(out)) return std::nullopt;
    return out;
}

}  // namespace detail

inline std::vector<std::string> validate_case(const CaseSpec& cs) {
    std::vector<std::string> bad;
    auto flag = [&](const std::string& msg) { bad.push_back(msg); };

    if (cs.name.empty()) flag("empty case name");
    std::set<int> chart_ids;
    std::set<Var> all_vars;
    for (const ChartModel& ch : cs.charts) {
        std::string where = "chart " + std::to_string(ch.id) + ": ";
        if (!chart_ids.insert(ch.id).second)
            flag(where + "duplicate chart id");

        std::set<Var> declared;
        for (auto& [v, c] : ch.vars) {
            if (v.chart != ch.id)
                flag(where + "variable " + var_str(v) +
                     " does not belong to this chart");
            if (!declared.insert(v).second)
                flag(where + "duplicate variable " + var_str(v));
            all_vars.insert(v);
        }

        std::set<Var> used;
        std::vector<int> present;
        std::set<Var> infs = ch.infinitesimals();
        for (int i = 0; i < kMaxPoints; ++i) {
            if (!ch.points[i]) continue;
            const P3<Poly>& p = *ch.points[i];
            detail::collect_vars(p.x, used);
            detail::collect_vars(p.y, used);
            detail::collect_vars(p.z, used);
            if (is_zero_vec(p))
                flag(where + "point " + std::string(1, point_label(i)) +
                     " is the zero vector");
            present.push_back(i);
        }
        std::vector<L3<Poly>> base_lines;
        for (auto& [key, l] : ch.lines) {
            detail::collect_vars(l.a, used);
            detail::collect_vars(l.b, used);
            detail::collect_vars(l.c, used);
            std::string lname = std::string("line ") +
                                point_label(key.first) + "," +
                                point_label(key.second);
            if (is_zero_vec(l)) flag(where + lname + " is the zero vector");
            for (int endpoint : {key.first, key.second}) {
                if (!ch.points[endpoint]) {
                    flag(where + lname + " references missing point " +
                         std::string(1, point_label(endpoint)));
                    continue;
                }
                Poly inc = pairing(l, *ch.points[endpoint]).zero_out(infs);
                if (!inc.is_zero())
                    flag(where + lname + " misses point " +
                         std::string(1, point_label(endpoint)) +
                         " at the base point");
            }
            base_lines.push_back(L3<Poly>{l.a.zero_out(infs),
                                          l.b.zero_out(infs),
                                          l.c.zero_out(infs)});
        }
        for (Var v : used)
            if (!declared.count(v))
                flag(where + "undeclared variable " + var_str(v));

        if (ch.line_stabilized && ch.lines.empty())
            flag(where + "line-stabilized chart declares no lines");

        std::vector<L3<Poly>> pool = base_lines;
        for (size_t i = 0; i < present.size(); ++i)
            for (size_t j = i + 1; j < present.size(); ++j)
                if (auto l = detail::base_limit_line(*ch.points[present[i]],
                                                     *ch.points[present[j]],
                                                     infs))
                    pool.push_back(*l);
        bool ok = detail::some_quadruple(
            static_cast<int>(pool.size()), [&](int a, int b, int c, int d) {
                std::vector<L3<Poly>> four{pool[a], pool[b], pool[c],
                                           pool[d]};
                return lines_in_general_position(four);
            });
        if (!ok)
            flag(where +
                 "no four lines in general position at the base point among "
                 "declared lines and joins of marked points");
    }

    for (Var v : cs.expect_span)
        if (!all_vars.count(v))
            flag("span variable " + var_str(v) + " never declared");

    std::set<std::string> ids;
    for (const FactDecl& f : cs.facts)
        if (!ids.insert("fact " + f.id).second)
            flag("duplicate fact id " + f.id);
    for (const RelDecl& r : cs.rels) {
        if (!ids.insert("rel " + r.id).second)
            flag("duplicate rel id " + r.id);
        auto check_side = [&](const RelSide& s) {
            if (!chart_ids.count(s.chart)) {
                flag("rel " + r.id + " references missing chart " +
                     std::to_string(s.chart));
                return;
            }
            const ChartModel& ch = cs.chart(s.chart);
            for (int k = 0; k < s.inv.arity(); ++k)
                if (!ch.points[s.inv.args[k]])
                    flag("rel " + r.id + " uses point " +
                         std::string(1, point_label(s.inv.args[k])) +
                         " missing from chart " + std::to_string(s.chart));
        };
        check_side(r.lhs);
        if (std::holds_alternative<RelSide>(r.rhs)) {
            check_side(std::get<RelSide>(r.rhs));
        } else if (chart_ids.count(r.lhs.chart)) {
            const RatFunc& f = std::get<RatFunc>(r.rhs);
            std::set<Var> declared = cs.chart(r.lhs.chart).declared_vars();
            std::set<Var> used;
            detail::collect_vars(f.num(), used);
            detail::collect_vars(f.den(), used);
            for (Var v : used)
                if (!declared.count(v))
                    flag("rel " + r.id + " right-hand side uses variable " +
                         var_str(v) + " undeclared in chart " +
                         std::to_string(r.lhs.chart));
        }
    }
    return bad;
}

// --- saturation and relabeling ---

inline std::vector<RelDecl> saturate_relations(const CaseSpec& cs) {
    std::vector<RelDecl> out;
    int counter = 0;
    for (int center = 0; center < kMaxPoints; ++center) {
        std::vector<int> others;
        for (int i = 0; i < kMaxPoints; ++i)
            if (i != center) others.push_back(i);
        for (size_t skip = 0; skip < others.size(); ++skip) {
            std::vector<int> picked;
            for (size_t i = 0; i < others.size(); ++i)
                if (i != skip) picked.push_back(others[i]);
            const int p = picked[0], q = picked[1], r = picked[2],
                      s = picked[3];
            const std::array<std::array<int, 4>, 3> pairings{
                {{p, q, r, s}, {p, r, q, s}, {p, s, q, r}}};
            for (const auto& pr : pairings) {
                InvariantSpec spec;
                spec.args = {pr[0], pr[1], pr[2], pr[3], center, 0};
                std::vector<const ChartModel*> where;
                for (const ChartModel& ch : cs.charts) {
                    try {
                        chart_invariant(ch, spec, nullptr);
                        where.push_back(&ch);
                    } catch (const ModuliError&) {
                    }
                }
                for (size_t i = 1; i < where.size(); ++i) {
                    RelDecl rel;
                    rel.id = "sat" + std::to_string(++counter);
                    rel.lhs = RelSide{where[0]->id, spec};
                    rel.rhs = RelSide{where[i]->id, spec};
                    out.push_back(std::move(rel));
                }
            }
        }
    }
    return out;
}

inline CaseSpec saturate_case(CaseSpec cs) {
    auto extra = saturate_relations(cs);
    cs.rels.insert(cs.rels.end(), extra.begin(), extra.end());
    return cs;
}

// perm[i] is the new index of the point previously labeled i
inline CaseSpec relabel_case(const CaseSpec& cs,
                             const std::array<int, kMaxPoints>& perm,
                             const std::string& new_name) {
    CaseSpec out = cs;
    out.name = new_name;
    for (size_t k = 0; k < cs.charts.size(); ++k) {
        ChartModel& ch = out.charts[k];
        std::array<std::optional<P3<Poly>>, kMaxPoints> pts;
        for (int i = 0; i < kMaxPoints; ++i)
            pts[perm[i]] = cs.charts[k].points[i];
        ch.points = std::move(pts);
        std::map<std::pair<int, int>, L3<Poly>> lines;
        for (auto& [key, l] : cs.charts[k].lines) {
            int i = perm[key.first], j = perm[key.second];
            if (i > j) std::swap(i, j);
            lines[{i, j}] = l;
        }
        ch.lines = std::move(lines);
    }
    auto map_spec = [&](InvariantSpec& spec) {
        for (int k = 0; k < spec.arity(); ++k)
            spec.args[k] = perm[spec.args[k]];
    };
    for (FactDecl& f : out.facts) map_spec(f.inv);
    for (RelDecl& r : out.rels) {
        map_spec(r.lhs.inv);
        if (std::holds_alternative<RelSide>(r.rhs))
            map_spec(std::get<RelSide>(r.rhs).inv);
    }
    return out;
}

// --- fact checking ---

struct FactReport {
    std::string fact_id;
    bool pass = false;
    std::vector<std::string> details;
};

// a chart whose classification comes out indeterminate is silent on the
// fact: it neither confirms nor contradicts, and some other chart must
// settle it
inline FactReport check_fact(const CaseSpec& cs, const FactDecl& f) {
    FactReport rep;
    rep.fact_id = f.id;
    int computable = 0;
    int confirming = 0;
    bool contradicted = false;
    for (const ChartModel& ch : cs.charts) {
        try {
            SymPair v = chart_invariant(ch, f.inv, nullptr);
            FactKind got = classify_at_base(ch, v);
            ++computable;
            if (got == f.kind) {
                ++confirming;
            } else if (got == FactKind::Undef) {
                rep.details.push_back("chart " + std::to_string(ch.id) +
                                      ": indeterminate at the base point");
            } else {
                contradicted = true;
                rep.details.push_back("chart " + std::to_string(ch.id) +
                                      ": expected " + fact_kind_str(f.kind) +
                                      ", computed " + fact_kind_str(got));
            }
        } catch (const ModuliError& e) {
            rep.details.push_back("chart " + std::to_string(ch.id) +
                                  ": not computable (" + e.what() + ")");
        }
    }
    rep.pass = !contradicted && confirming > 0;
    if (computable == 0)
        rep.details.push_back("fact computable in no chart");
    else if (!contradicted && confirming == 0)
        rep.details.push_back("no chart settles the fact");
    return rep;
}

inline std::vector<FactReport> check_facts(const CaseSpec& cs) {
    std::vector<FactReport> out;
    for (const FactDecl& f : cs.facts) out.push_back(check_fact(cs, f));
    return out;
}

}  // namespace moduli
