#include <doctest.h>

#include "agv/generators.hpp"
#include "agv/strategy.hpp"
#include "fuzz.hpp"
#include "oracles.hpp"

using namespace agv;

namespace
{

/// Every bounded lasso of the restricted module satisfies g.
bool replay_ok(const Arena& arena, const JointStrategy& s, const FormulaPtr& g, std::size_t bound)
{
    const auto m = restrict_by_strategy(arena, s);
    bool ok = true;
    std::size_t count = 0;
    oracle::module_lassos(m, bound, [&](const auto& stem, const auto& loop) {
        ++count;
        if (!oracle::holds_on_lasso(g, oracle::labels_of(m, stem), oracle::labels_of(m, loop)))
            ok = false;
    });
    return ok && count > 0;
}

} // namespace

TEST_CASE("strategy counts and enumeration order")
{
    auto b = gen_tgc(2);
    CHECK(count_joint_strategies(b.system, {0}) == 27);
    CHECK(count_joint_strategies(b.system, {0, 1}) == 729);
    auto all = enumerate_joint_strategies(b.system, {0, 1});
    CHECK(all.size() == 729);
    CHECK(all[0].strategies[0].choice == std::vector<std::size_t>{0, 0, 0});
    // Last state of the last member moves fastest.
    CHECK(all[1].strategies[1].choice == std::vector<std::size_t>{0, 0, 1});
    CHECK(all[3].strategies[1].choice == std::vector<std::size_t>{0, 1, 0});
    CHECK(all.back().strategies[0].choice == std::vector<std::size_t>{2, 2, 2});
    CHECK(enumerate_joint_strategies(b.system, {0}, 5).size() == 5);
}

TEST_CASE("restriction keeps exactly the implementing transitions")
{
    auto b = gen_tgc(2);
    auto arena = make_arena(b.system);
    CHECK(arena.module.state_count() == 16);
    for (const auto& s : enumerate_joint_strategies(b.system, {0}, 27)) {
        auto m = restrict_by_strategy(arena, s);
        CHECK(m.transitions.size() <= arena.module.transitions.size());
        std::size_t kept = 0;
        for (std::size_t t = 0; t < arena.module.transitions.size(); ++t) {
            const auto& tr = arena.module.transitions[t];
            // moves not involving train 1 always survive
            if (arena.local_move[t][0] < 0)
                CHECK(implements(arena, t, s));
            if (implements(arena, t, s)) {
                ++kept;
                CHECK(m.find_transition(tr).has_value());
            }
        }
        CHECK(kept == m.transitions.size());
    }
}

TEST_CASE("two-train coalition objectives hold, witnesses replay")
{
    auto b = gen_tgc(2);
    auto arena = make_arena(b.system);
    for (const char* text : {"<<1,2>>(G F x1=1 & G F x2=1)", "<<1,2>>(G F s=1 & G F s=2)"}) {
        auto f = parse_formula(text);
        auto r = verify(b.system, f);
        CHECK(r.verdict == Verdict::True);
        REQUIRE(r.witness.has_value());
        CHECK(holds_under_strategy(arena, *r.witness, f->lhs).holds);
        CHECK(replay_ok(arena, *r.witness, f->lhs, 12));
    }
}

TEST_CASE("a single train cannot force its own tunnel visits")
{
    auto b = gen_tgc(2);
    auto r = verify(b.system, parse_formula("<<1>>G F x1=1"));
    CHECK(r.verdict == Verdict::False);
    REQUIRE(r.counterexample.has_value());
    std::vector<Valuation> stem, loop;
    for (auto l : r.counterexample->stem)
        stem.push_back(r.cex_alphabet.valuation(l));
    for (auto l : r.counterexample->loop)
        loop.push_back(r.cex_alphabet.valuation(l));
    CHECK_FALSE(oracle::holds_on_lasso(parse_formula("G F x1=1"), stem, loop));
    CHECK(r.stats.strategies >= 1);
}

TEST_CASE("LTL, nested formulas and unsupported semantics")
{
    auto b = gen_tgc(2);
    CHECK(verify(b.system, parse_formula("G (x1=0 | x1=1 | x1=2)")).verdict == Verdict::True);
    CHECK(verify(b.system, parse_formula("G F x1=1")).verdict == Verdict::False);
    CHECK(verify(b.system, parse_formula("<<3>>G F x1=1")).verdict == Verdict::True);
    auto nested = verify(b.system, parse_formula("<<1>>F <<2>>G s=0"));
    CHECK(nested.verdict != Verdict::Inconclusive);
    CHECK(verify(b.system, parse_formula("!<<1>>G F x1=1")).verdict == Verdict::True);
    CHECK_THROWS_AS(verify(b.system, parse_formula("<<1>>G F x1=1"), Semantics::iR), ModelError);
}

TEST_CASE("strategy budget yields an inconclusive verdict")
{
    auto b = gen_tgc(2);
    SynthesisOptions o;
    o.lazy = false;
    o.max_strategies = 3;
    auto r = verify(b.system, parse_formula("<<1>>G F x1=1"), Semantics::ir, o);
    CHECK(r.verdict == Verdict::Inconclusive);
}

TEST_CASE("train 2 under A_012 keeps granting train 1")
{
    auto b = gen_tgc(2);
    System sub;
    sub.domain = b.system.domain;
    sub.agents = {b.system.agents[1]};
    const auto& a = b.assumptions.at("A012");
    auto arena = make_arena(sub, &a);
    auto r = synthesize(arena, {0}, parse_formula("G F s=1"));
    REQUIRE(r.verdict == Verdict::True);
    CHECK(holds_under_strategy(arena, *r.witness, parse_formula("G F s=1")).holds);
    // GF s=2 is out of train 2's hands: the controller may keep serving train 1.
    CHECK(synthesize(arena, {0}, parse_formula("G F s=2")).verdict == Verdict::False);
}

TEST_CASE("pruned search agrees with full enumeration on random systems")
{
    std::mt19937 rng(7);
    std::size_t agree = 0, trues = 0;
    for (int it = 0; it < 300; ++it) {
        auto sys = fuzz::random_system(rng);
        VarList vars;
        for (const auto& ag : sys.agents)
            vars = var_union(vars, ag.module.state_vars);
        const auto pool = fuzz::objective_pool(vars);
        const auto& g = pool[static_cast<std::size_t>(it) % pool.size()];
        std::vector<std::size_t> coalition;
        for (std::size_t i = 0; i < sys.size(); ++i)
            if ((it >> i) & 1 || sys.size() == 1)
                coalition.push_back(i);
        if (coalition.empty())
            coalition.push_back(0);
        auto arena = make_arena(sys);
        const auto f = parse_formula(g);
        SynthesisOptions eager;
        eager.lazy = false;
        auto lazy = synthesize(arena, coalition, f);
        auto full = synthesize(arena, coalition, f, eager);
        CHECK(lazy.verdict == full.verdict);
        if (lazy.verdict == Verdict::True) {
            ++trues;
            CHECK(holds_under_strategy(arena, *lazy.witness, f).holds);
        }
        ++agree;
    }
    CHECK(agree == 300);
    CHECK(trues > 0);
}
