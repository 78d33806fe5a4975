// Case-file model: grammar round trip, chart validity invariants, symbolic
// invariant evaluation on charts, base-point fact classification, relation
// saturation and configuration relabeling.
#include <catch2/catch_amalgamated.hpp>
#include <moduli/chart.hpp>

using namespace moduli;

static const char* kToy = R"(case toy
expect corank 2 span x_1, y_1

chart 1
var x_1 class generic
var y_1 class generic
point A = (1 : 0 : 0)
point B = (0 : 1 : 0)
point C = (0 : 0 : 1)
point D = (1 : 1 : 1)
point E = (x_1 : y_1 : 1)

fact f1: cr(A,B;E,D|C) = nonzero
)";

TEST_CASE("case parsing") {
    CaseSpec cs = CaseSpec::parse(kToy);
    CHECK(cs.name == "toy");
    CHECK(cs.expect_corank == 2);
    REQUIRE(cs.expect_span.size() == 2);
    CHECK(cs.expect_span[0] == Var{1, 'x'});
    REQUIRE(cs.charts.size() == 1);
    const ChartModel& ch = cs.charts[0];
    CHECK(ch.id == 1);
    CHECK_FALSE(ch.line_stabilized);
    REQUIRE(ch.vars.size() == 2);
    CHECK(ch.vars[0].second == VarClass::GenericParam);
    REQUIRE(ch.points[4].has_value());
    CHECK(ch.points[4]->x.str() == "x_1");
    CHECK_FALSE(ch.points[5].has_value());
    REQUIRE(cs.facts.size() == 1);
    CHECK(cs.facts[0].id == "f1");
    CHECK(cs.facts[0].kind == FactKind::Nonzero);
    CHECK(cs.facts[0].inv.str() == "cr(A,B;E,D|C)");
    CHECK(cs.rels.empty());
}

TEST_CASE("print/parse round trip") {
    CaseSpec cs = CaseSpec::parse(kToy);
    std::string printed = cs.print();
    CaseSpec back = CaseSpec::parse(printed);
    CHECK(back == cs);
    CHECK(back.print() == printed);
}

TEST_CASE("relation grammar, both right-hand forms") {
    std::string text = std::string(kToy) +
                       "chart 2\n"
                       "var x_2 class generic\n"
                       "var y_2 class generic\n"
                       "point A = (1 : 0 : 0)\n"
                       "point B = (0 : 1 : 0)\n"
                       "point C = (0 : 0 : 1)\n"
                       "point D = (1 : 1 : 1)\n"
                       "point E = (x_2 : y_2 : 1)\n"
                       "rel r1: 1:cr(A,B;E,D|C) == 2:cr(A,B;E,D|C)\n"
                       "rel r2: 1:cr(A,B;E,D|C) == (y_1)/(x_1)\n";
    CaseSpec cs = CaseSpec::parse(text);
    REQUIRE(cs.rels.size() == 2);
    CHECK(cs.rels[0].lhs.chart == 1);
    REQUIRE(std::holds_alternative<RelSide>(cs.rels[0].rhs));
    CHECK(std::get<RelSide>(cs.rels[0].rhs).chart == 2);
    REQUIRE(std::holds_alternative<RatFunc>(cs.rels[1].rhs));
    CHECK(std::get<RatFunc>(cs.rels[1].rhs) == RatFunc::parse("y_1/x_1"));
    CaseSpec back = CaseSpec::parse(cs.print());
    CHECK(back == cs);
}

TEST_CASE("parse errors carry line information") {
    CHECK_THROWS_AS(CaseSpec::parse("case t\nexpect corank 1 span x_1\nbogus\n"),
                    ParseError);
    CHECK_THROWS_AS(CaseSpec::parse("case t\nexpect corank 1 span x_1\n"
                                    "var x_1 class inf\n"),
                    ParseError);  // var outside chart
    CHECK_THROWS_AS(
        CaseSpec::parse("case t\nexpect corank 1 span x_1\nchart 1\n"
                        "var x_1 class small\n"),
        ParseError);  // unknown class
}

TEST_CASE("symbolic invariant on a chart and the frame example") {
    CaseSpec cs = CaseSpec::parse(kToy);
    SymPair v = chart_invariant(cs.charts[0],
                                InvariantSpec::parse("cr(A,B;E,D|C)"), nullptr);
    CHECK(v.num.str() == "y_1");
    CHECK(v.den.str() == "x_1");
}

TEST_CASE("fact classification at the base point") {
    auto classify = [](const char* e_coords) {
        std::string text = "case t\nexpect corank 0 span\nchart 1\n"
                           "var x_1 class inf\nvar y_1 class inf\n"
                           "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\n"
                           "point C = (0 : 0 : 1)\npoint D = (1 : 1 : 1)\n"
                           "point E = " + std::string(e_coords) + "\n";
        CaseSpec cs = CaseSpec::parse(text);
        SymPair v = chart_invariant(
            cs.charts[0], InvariantSpec::parse("cr(A,B;E,D|C)"), nullptr);
        return classify_at_base(cs.charts[0], v);
    };
    CHECK(classify("(1 : 1 : 1)") == FactKind::Nonzero);
    CHECK(classify("(1 : x_1 : 1)") == FactKind::Zero);
    CHECK(classify("(x_1 : 1 : 1)") == FactKind::Inf);
    CHECK(classify("(x_1 : y_1 : 1)") == FactKind::Undef);
    // common factors cancel before classification
    CHECK(classify("(x_1 : x_1*y_1 : 1)") == FactKind::Zero);
}

TEST_CASE("case validity accepts the toy case") {
    CaseSpec cs = CaseSpec::parse(kToy);
    CHECK(validate_case(cs).empty());
}

TEST_CASE("case validity rejects broken data") {
    auto violations = [](const std::string& text) {
        return validate_case(CaseSpec::parse(text));
    };
    // three points collinear at base leave no four independent lines
    std::string collinear = "case t\nexpect corank 0 span\nchart 1\n"
                            "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\n"
                            "point C = (0 : 0 : 1)\npoint D = (1 : 1 : 0)\n";
    CHECK_FALSE(violations(collinear).empty());
    // undeclared variable in a coordinate
    std::string undeclared = "case t\nexpect corank 0 span\nchart 1\n"
                             "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\n"
                             "point C = (0 : 0 : 1)\npoint D = (1 : 1 : z_1)\n";
    CHECK_FALSE(violations(undeclared).empty());
    // variable declared under the wrong chart number
    std::string foreign = "case t\nexpect corank 0 span\nchart 1\n"
                          "var x_2 class inf\n"
                          "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\n"
                          "point C = (0 : 0 : 1)\npoint D = (1 : 1 : 1)\n";
    CHECK_FALSE(violations(foreign).empty());
    // declared line not incident to its points at base
    std::string skew = "case t\nexpect corank 0 span\nchart 1\n"
                       "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\n"
                       "point C = (0 : 0 : 1)\npoint D = (1 : 1 : 1)\n"
                       "line A,B = (0 : 1 : 1)\n";
    CHECK_FALSE(violations(skew).empty());
    // span variable never declared
    std::string ghost = "case t\nexpect corank 1 span t_9\nchart 1\n"
                        "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\n"
                        "point C = (0 : 0 : 1)\npoint D = (1 : 1 : 1)\n";
    CHECK_FALSE(violations(ghost).empty());
}

TEST_CASE("collapsed configurations validate through limit lines") {
    // six points collapsing pairwise onto a triangle at the base: the two
    // declared lines plus limits of joins give four independent directions
    std::string text =
        "case t\nexpect corank 0 span\nchart 7\nflag line-stabilized\n"
        "var x_7 class nonzero\nvar y_7 class inf\nvar z_7 class inf\n"
        "var t_7 class inf\n"
        "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\npoint C = (0 : 0 : 1)\n"
        "point D = (y_7 : 1 : x_7)\npoint E = (z_7 : z_7 : 1)\n"
        "point F = (t_7 : 1 : t_7)\n"
        "line C,E = (1 : -1 : 0)\nline B,F = (1 : 0 : -1)\n";
    CaseSpec cs = CaseSpec::parse(text);
    CHECK(validate_case(cs).empty());
    // the flag asserts the chart is anchored by declared lines
    CaseSpec stripped = cs;
    stripped.charts[0].lines.clear();
    CHECK_FALSE(validate_case(stripped).empty());
    // three double points and no declared lines: joins of the colliding
    // pairs keep their limiting direction after common factors cancel
    std::string doubles =
        "case t\nexpect corank 0 span\nchart 7\n"
        "var x_7 class inf\nvar y_7 class inf\nvar z_7 class inf\n"
        "var t_7 class nonzero\n"
        "point A = (1 : 0 : 0)\npoint B = (1 : x_7 : x_7)\n"
        "point C = (0 : 1 : 0)\npoint D = (y_7 : 1 : y_7)\n"
        "point E = (0 : 0 : 1)\npoint F = (z_7*t_7 : z_7 : 1)\n";
    CHECK(validate_case(CaseSpec::parse(doubles)).empty());
    // a configuration flattened onto a single line has no second direction
    std::string flat =
        "case t\nexpect corank 0 span\nchart 1\n"
        "var x_1 class inf\nvar y_1 class inf\n"
        "point A = (1 : 0 : 0)\npoint B = (1 : x_1 : 0)\n"
        "point C = (1 : y_1 : 0)\npoint D = (0 : 1 : 0)\n";
    CHECK_FALSE(validate_case(CaseSpec::parse(flat)).empty());
}

TEST_CASE("facts tolerate indeterminate charts but not contradictions") {
    std::string text =
        "case t\nexpect corank 0 span\n"
        "chart 1\n"
        "var x_1 class inf\nvar y_1 class inf\n"
        "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\n"
        "point C = (0 : 0 : 1)\npoint D = (1 : 1 : 1)\n"
        "point E = (1 : x_1 : y_1)\n"
        "chart 2\n"
        "var x_2 class inf\nvar y_2 class inf\n"
        "point A = (1 : 0 : 0)\npoint B = (0 : 1 : 0)\n"
        "point C = (0 : 0 : 1)\npoint D = (1 : 1 : 1)\n"
        "point E = (x_2 : y_2 : 1)\n"
        "fact f1: cr(A,B;E,D|C) = zero\n"
        "fact f2: cr(B,A;E,D|C) = inf\n"
        "fact f3: cr(A,D;E,B|C) = undef\n"
        "fact f4: cr(A,B;F,D|C) = zero\n";
    CaseSpec cs = CaseSpec::parse(text);
    // the value is y/x on E=(x:y:1), so chart 2 is indeterminate at the
    // base and stays silent; chart 1 settles the fact as zero
    CHECK(check_fact(cs, cs.facts[0]).pass);
    CHECK(check_fact(cs, cs.facts[1]).pass);
    // chart 1 computes a definite zero, contradicting the declared
    // indeterminacy
    CHECK_FALSE(check_fact(cs, cs.facts[2]).pass);
    // F is nowhere declared, so no chart can compute the fact
    CHECK_FALSE(check_fact(cs, cs.facts[3]).pass);
}

TEST_CASE("saturation links every chart pair through canonical tuples") {
    std::string text = std::string(kToy) +
                       "chart 2\n"
                       "var x_2 class generic\n"
                       "var y_2 class generic\n"
                       "point A = (1 : 0 : 0)\n"
                       "point B = (0 : 1 : 0)\n"
                       "point C = (0 : 0 : 1)\n"
                       "point D = (1 : 1 : 1)\n"
                       "point E = (x_2 : y_2 : 1)\n";
    CaseSpec cs = CaseSpec::parse(text);
    auto rels = saturate_relations(cs);
    // five points: 5 centers, one argument set each, three pairings
    CHECK(rels.size() == 15);
    for (auto& r : rels) {
        CHECK(r.lhs.chart == 1);
        CHECK(std::get<RelSide>(r.rhs).chart == 2);
    }
    // deterministic ids
    CHECK(rels[0].id == "sat1");
    CHECK(rels[14].id == "sat15");
}

TEST_CASE("relabeling permutes points, lines and invariant arguments") {
    CaseSpec cs = CaseSpec::parse(kToy);
    std::array<int, 6> swap_ab{1, 0, 2, 3, 4, 5};
    CaseSpec out = relabel_case(cs, swap_ab, "toy-swapped");
    CHECK(out.name == "toy-swapped");
    CHECK(out.charts[0].points[0]->y.str() == "1");
    CHECK(out.charts[0].points[1]->x.str() == "1");
    CHECK(out.facts[0].inv.str() == "cr(B,A;E,D|C)");
    CHECK(validate_case(out).empty());
    // value of the relabeled invariant equals the original
    SymPair v = chart_invariant(out.charts[0],
                                out.facts[0].inv, nullptr);
    CHECK(v.num.str() == "y_1");
    CHECK(v.den.str() == "x_1");
}
