#include <doctest.h>

#include "agv/generators.hpp"
#include "agv/logic.hpp"
#include "oracles.hpp"

using namespace agv;

TEST_CASE("parsing the two-train coalition formula")
{
    auto f = parse_formula("<<1,2>>(G F x1=1 & G F x2=1)");
    REQUIRE(f->op == Op::Coop);
    CHECK(f->coalition == std::vector<std::string>{"1", "2"});
    auto body = f->lhs;
    REQUIRE(body->op == Op::And);
    CHECK(body->lhs->op == Op::Globally);
    CHECK(body->lhs->lhs->op == Op::Finally);
    CHECK(body->lhs->lhs->lhs->atom == Valuation{{"x1", 1}});
    CHECK(equal(f, fml::coop({"1", "2"}, fml::conj(fml::globally(fml::finally(fml::atom("x1", 1))),
                                                    fml::globally(fml::finally(fml::atom("x2", 1)))))));
}

TEST_CASE("printing round-trips")
{
    for (const char* s : {"<<1,2>>(G F x1=1 & G F x2=1)", "G F s=1", "<<train1>>F <<2>>G x=0",
                          "(a=1 U b=0) U c=1", "a=1 U (b=0 U c=1)", "!(a=1 | b=1) -> F G c=0", "true & !false",
                          "<<1>>(x=0 -> G y=1)"}) {
        auto f = parse_formula(s);
        auto again = parse_formula(to_string(f));
        CHECK_MESSAGE(equal(f, again), s << " printed as " << to_string(f));
    }
    CHECK(to_string(parse_formula("(a=1 & b=1) & c=1")) == "a=1 & b=1 & c=1");
}

TEST_CASE("F and G are operators unless used as variable names")
{
    auto f = parse_formula("F=1 & G F=2");
    REQUIRE(f->op == Op::And);
    CHECK(f->lhs->op == Op::Atom);
    CHECK(f->lhs->atom == Valuation{{"F", 1}});
    CHECK(f->rhs->op == Op::Globally);
}

TEST_CASE("syntax errors carry a position")
{
    CHECK_THROWS_AS(parse_formula("<<1>> X p=1"), FormulaSyntaxError);
    try {
        parse_formula("G (s=1");
        FAIL("expected an error");
    } catch (const FormulaSyntaxError& e) {
        CHECK(e.line == 1);
        CHECK(e.column >= 7);
    }
    try {
        parse_formula("<<1>> X p=1");
    } catch (const FormulaSyntaxError& e) {
        CHECK(std::string(e.what()).find("next") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_formula("s="), FormulaSyntaxError);
    CHECK_THROWS_AS(parse_formula("<<>>F s=1"), FormulaSyntaxError);
}

TEST_CASE("classification")
{
    CHECK(classify(parse_formula("<<1,2>>(G F x1=1 & G F x2=1)")) == FormulaClass::OneATLs);
    CHECK(classify(parse_formula("G F s=1")) == FormulaClass::LTL);
    CHECK(classify(parse_formula("<<1>> F <<2>> G x=0")) == FormulaClass::Nested);
    CHECK(classify(parse_formula("!<<1>>F x=0")) == FormulaClass::Nested);
    CHECK(std::string(class_name(FormulaClass::OneATLs)).size() > 0);
}

TEST_CASE("atoms")
{
    CHECK(eval_atom({{"x1", 1}}, {{"x1", 1}, {"s", 0}}));
    CHECK(eval_atom({}, {{"s", 2}}));
    CHECK_FALSE(eval_atom({{"s", 1}}, {{"s", 2}, {"x1", 0}}));
    CHECK(formula_vars(parse_formula("G (x=0 U y=1) & <<1>>F x=2")) == VarList{"x", "y"});
}

TEST_CASE("lowering and simplification preserve meaning on lassos")
{
    std::vector<FormulaPtr> leaves{fml::atom("x", 0), fml::atom("x", 1), fml::top(), fml::bottom()};
    std::vector<Valuation> vals{{{"x", 0}}, {{"x", 1}}};
    std::size_t n = 0;
    for (std::size_t size = 1; size <= 4; ++size)
        for (const auto& f : oracle::all_formulas(size, leaves)) {
            auto l = lower(f);
            auto s = simplify(f);
            CHECK(formula_size(s) <= formula_size(f) + 1);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c) {
                        std::vector<Valuation> stem{vals[a]}, loop{vals[b], vals[c]};
                        const bool want = oracle::holds_on_lasso(f, stem, loop);
                        if (oracle::holds_on_lasso(l, stem, loop) != want ||
                            oracle::holds_on_lasso(s, stem, loop) != want)
                            FAIL(to_string(f));
                        ++n;
                    }
        }
    CHECK(n > 1000);
    CHECK(equal(simplify(parse_formula("F F x=1")), parse_formula("F x=1")));
    CHECK(equal(simplify(parse_formula("!!x=1")), parse_formula("x=1")));
    CHECK(equal(simplify(parse_formula("G G x=1")), parse_formula("G x=1")));
}

TEST_CASE("rule shape: train-gate objectives")
{
    auto b = gen_tgc(2);
    const auto& sys = b.system;
    const auto& a = b.assumptions.at("A012");
    std::vector<std::vector<std::size_t>> parts{{0}, {1}};
    // Each train sees its own variable plus the assumption's s.
    std::vector<VarList> visible{var_union({"x1"}, a.module.state_vars), var_union({"x2"}, a.module.state_vars)};

    auto q = rule_shape_candidates(parse_formula("<<1,2>>(G F s=1 & G F s=2)"), sys, parts, visible);
    REQUIRE(q.size() == 4);
    CHECK(to_string(q[0].part_objectives[0]) == "G F s=1");
    CHECK(to_string(q[0].part_objectives[1]) == "G F s=2");
    CHECK(to_string(q[1].part_objectives[0]) == "G F s=2");
    CHECK(to_string(q[1].part_objectives[1]) == "G F s=1");

    auto p = rule_shape_candidates(parse_formula("<<1,2>>(G F x1=1 & G F x2=1)"), sys, parts, visible);
    REQUIRE(p.size() == 1);
    CHECK(to_string(p[0].part_objectives[0]) == "G F x1=1");
    CHECK(to_string(p[0].part_objectives[1]) == "G F x2=1");
    CHECK(check_rule_shape(parse_formula("<<1,2>>(G F x1=1 & G F x2=1)"), sys, parts, visible).coalition ==
          std::vector<std::size_t>{0, 1});

    CHECK_THROWS_AS(rule_shape_candidates(parse_formula("<<1,2>>G (x1=0 U x2=1)"), sys, parts, visible),
                    RuleShapeError);
    try {
        rule_shape_candidates(parse_formula("<<1,2>>G (x1=0 U x2=1)"), sys, parts, {{"x1"}, {"s"}});
    } catch (const RuleShapeError& e) {
        CHECK(std::string(e.what()).find("x") != std::string::npos);
    }
    CHECK_THROWS_AS(rule_shape_candidates(parse_formula("<<1>>G F s=1"), sys, parts, visible), RuleShapeError);
    CHECK_THROWS_AS(rule_shape_candidates(parse_formula("G F s=1"), sys, parts, visible), RuleShapeError);
}
