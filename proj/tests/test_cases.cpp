// The vendored corpus of degeneration models: every file parses and
// round-trips through print, passes structural validation, has each declared
// degeneracy fact confirmed by symbolic base evaluation, and certifies its
// expected corank with a verified spanning set and matching sampled ranks.
// Cross-cutting properties: the corank is stable under saturating with every
// derivable pencil relation, stable under a relabeling symmetry, and drops
// detectably when a load-bearing relation is removed.
#include <catch2/catch_amalgamated.hpp>
#include <moduli/cotangent.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace moduli;

namespace {

const std::filesystem::path kDir = MODULI_CASE_DIR;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in.good()) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::filesystem::path> case_files() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(kDir))
        if (e.path().extension() == ".case") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

CaseSpec load(const std::string& stem) {
    return CaseSpec::parse(slurp(kDir / (stem + ".case")));
}

std::vector<std::string> span_strings(const CotangentReport& rep) {
    std::vector<std::string> out;
    for (const Var& v : rep.expected_span) out.push_back(var_str(v));
    return out;
}

const std::string& substitution(const CotangentReport& rep, Var v) {
    static const std::string none = "<none>";
    auto it = rep.substitutions.find(v);
    if (it == rep.substitutions.end()) return none;
    static std::string buf;
    buf = it->second.str();
    return buf;
}

}  // namespace

TEST_CASE("the corpus holds all seventeen models") {
    std::vector<std::string> names;
    for (const auto& p : case_files()) names.push_back(CaseSpec::parse(slurp(p)).name);
    std::sort(names.begin(), names.end());
    std::vector<std::string> want{"A.1",  "A.2",  "A.4",  "B.2",        "B.4",
                                  "C.2",  "C.4",  "D",    "E.1",        "E.2",
                                  "E.3",  "E.6",  "F.1",  "F.1'",       "Y5.deep",
                                  "Y5.generic",   "Y5.simple"};
    std::sort(want.begin(), want.end());
    CHECK(names == want);
}

TEST_CASE("every file parses, validates, and round-trips through print") {
    for (const auto& p : case_files()) {
        INFO(p.filename().string());
        CaseSpec cs = CaseSpec::parse(slurp(p));
        CHECK(validate_case(cs).empty());
        CaseSpec again = CaseSpec::parse(cs.print());
        CHECK(again == cs);
    }
}

TEST_CASE("every declared degeneracy fact is confirmed at the base point") {
    for (const auto& p : case_files()) {
        CaseSpec cs = CaseSpec::parse(slurp(p));
        for (const FactReport& fr : check_facts(cs)) {
            INFO(cs.name << " fact " << fr.fact_id);
            for (const std::string& d : fr.details) INFO(d);
            CHECK(fr.pass);
        }
    }
}

TEST_CASE("every case certifies its expected corank exactly") {
    int six_point = 0, five_point = 0;
    for (const auto& p : case_files()) {
        CaseSpec cs = CaseSpec::parse(slurp(p));
        INFO(cs.name);
        CotangentReport rep = cotangent_report(cs);
        for (const std::string& n : rep.notes) INFO(n);
        CHECK(rep.corank == cs.expect_corank);
        CHECK(rep.corank_ok);
        CHECK(rep.span_ok);
        CHECK(rep.ok());
        for (const PivotCert& c : rep.ledger)
            CHECK(c.value.eval(c.sample) == c.sample_value);
        if (cs.name.rfind("Y5", 0) == 0) {
            CHECK(rep.corank == 2);
            ++five_point;
        } else {
            CHECK(rep.corank == 4);
            ++six_point;
        }
    }
    CHECK(six_point == 14);
    CHECK(five_point == 3);
}

TEST_CASE("sampled ranks agree with the symbolic rank on every case") {
    for (const auto& p : case_files()) {
        CaseSpec cs = CaseSpec::parse(slurp(p));
        INFO(cs.name);
        CotangentReport rep = cotangent_report(cs);
        CHECK(sampled_rank_agrees(rep, 3, 20260815));
    }
}

TEST_CASE("declared closed forms match the computed invariants symbolically") {
    int checked = 0;
    for (const auto& p : case_files()) {
        CaseSpec cs = CaseSpec::parse(slurp(p));
        for (const RelDecl& r : cs.rels) {
            if (!std::holds_alternative<RatFunc>(r.rhs)) continue;
            INFO(cs.name << " rel " << r.id);
            SymPair v = chart_invariant(cs.chart(r.lhs.chart), r.lhs.inv, nullptr);
            CHECK(sym_pair_matches(v, std::get<RatFunc>(r.rhs)));
            ++checked;
        }
    }
    CHECK(checked >= 50);
}

TEST_CASE("named spanning sets come out exactly as published") {
    auto span_of = [](const std::string& stem) {
        CotangentReport rep = cotangent_report(load(stem));
        REQUIRE(rep.span_ok);
        return span_strings(rep);
    };
    CHECK(span_of("A1") == std::vector<std::string>{"x_1", "x_2", "x_3", "y_1"});
    CHECK(span_of("D") == std::vector<std::string>{"y_2", "z_2", "t_2", "z_3"});
    CHECK(span_of("E2") == std::vector<std::string>{"z_1", "x_7", "x_8", "x_9"});
    CHECK(span_of("F1p") == std::vector<std::string>{"t_1", "t_2", "t_3", "t_7"});
}

TEST_CASE("constraint relations solve the parameters they pin") {
    CotangentReport a1 = cotangent_report(load("A1"));
    CHECK(substitution(a1, Var{2, 't'}) == "(1)/(x_1)");
    CHECK(substitution(a1, Var{3, 't'}) == "(1)/(x_2)");
    CHECK(substitution(a1, Var{3, 'x'}) == "(1)/(t_1)");

    CotangentReport a2 = cotangent_report(load("A2"));
    CHECK(substitution(a2, Var{2, 'y'}) == "(1)/(1 - y_1)");
    CHECK(substitution(a2, Var{3, 'x'}) == "t_1");

    CotangentReport d = cotangent_report(load("D"));
    CHECK(substitution(d, Var{3, 't'}) == "1 - t_2");
    CHECK(substitution(d, Var{4, 'z'}) == "1 - t_2");

    CotangentReport e1 = cotangent_report(load("E1"));
    CHECK(substitution(e1, Var{2, 't'}) == "(1)/(t_1)");
    CHECK(substitution(e1, Var{4, 'y'}) == "t_1");

    CotangentReport y5 = cotangent_report(load("Y5_simple"));
    CHECK(substitution(y5, Var{2, 'y'}) == "1 - y_1");
}

TEST_CASE("saturating with every derivable pencil relation never moves the corank") {
    for (const auto& p : case_files()) {
        CaseSpec cs = CaseSpec::parse(slurp(p));
        INFO(cs.name);
        CaseSpec fat = saturate_case(cs);
        CHECK(fat.rels.size() >= cs.rels.size());
        CotangentReport rep = cotangent_report(fat);
        CHECK(rep.corank == cs.expect_corank);
        CHECK(rep.corank_ok);
    }
}

TEST_CASE("relabeling by the pair-swap symmetry preserves the certificate") {
    const std::array<int, 6> mirror{1, 0, 3, 2, 5, 4};
    for (const char* stem : {"A1", "F1p"}) {
        CaseSpec cs = load(stem);
        CaseSpec flipped = relabel_case(cs, mirror, cs.name + "-mirror");
        INFO(flipped.name);
        CHECK(validate_case(flipped).empty());
        for (const FactReport& fr : check_facts(flipped)) CHECK(fr.pass);
        CotangentReport rep = cotangent_report(flipped);
        CHECK(rep.corank == cs.expect_corank);
        CHECK(rep.ok());
        CHECK(CaseSpec::parse(flipped.print()) == flipped);
    }
}

TEST_CASE("each relation in the minimal model is load-bearing") {
    CaseSpec cs = load("A1");
    for (const RelDecl& r : cs.rels) {
        if (r.id.rfind("cf", 0) == 0) continue;
        CaseSpec cut = cs;
        std::erase_if(cut.rels, [&](const RelDecl& q) { return q.id == r.id; });
        INFO("without " << r.id);
        CotangentReport rep = cotangent_report(cut);
        CHECK(rep.corank == 5);
        CHECK_FALSE(rep.corank_ok);
        CHECK_FALSE(rep.ok());
    }
}

TEST_CASE("closed-form identities contribute no rank") {
    CaseSpec cs = load("A1");
    CaseSpec bare = cs;
    std::erase_if(bare.rels,
                  [](const RelDecl& r) { return r.id.rfind("cf", 0) == 0; });
    REQUIRE(bare.rels.size() < cs.rels.size());
    CHECK(cotangent_report(bare).rank == cotangent_report(cs).rank);
}
