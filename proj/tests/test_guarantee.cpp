#include <doctest.h>

#include <random>
#include <regex>

#include "agv/generators.hpp"
#include "agv/guarantee.hpp"
#include "agv/rules.hpp"
#include "fuzz.hpp"
#include "oracles.hpp"

using namespace agv;

namespace
{

Valuation val(std::initializer_list<std::pair<const char*, int>> kv)
{
    Valuation v;
    for (auto [k, x] : kv)
        v.set(k, x);
    return v;
}

Module tgc_controller_and_train2()
{
    auto b = gen_tgc(2);
    std::vector<Module> ms{atomize(b.system.agents[2].module), atomize(b.system.agents[1].module)};
    return compose_all(ms);
}

// s-values of stem + a few loop unrollings, with repeats collapsed.
std::string contracted_s(const Module& m, const std::vector<StateId>& stem, const std::vector<StateId>& loop, int reps)
{
    std::string out;
    auto push = [&](StateId q) {
        const char c = static_cast<char>('0' + m.label(q).at("s"));
        if (out.empty() || out.back() != c)
            out.push_back(c);
    };
    for (auto q : stem)
        push(q);
    for (int r = 0; r < reps; ++r)
        for (auto q : loop)
            push(q);
    return out;
}

} // namespace

TEST_CASE("curtailment contracts constant blocks")
{
    WordPrefix w{val({{"x", 0}, {"y", 0}}), val({{"x", 0}, {"y", 1}}), val({{"x", 1}, {"y", 1}}),
                 val({{"x", 1}, {"y", 0}})};
    auto r = curtail_prefix(w, {"x"}, {0, 2});
    REQUIRE(r.word);
    CHECK(r.word->size() == 2);
    CHECK((*r.word)[0] == val({{"x", 0}}));
    CHECK((*r.word)[1] == val({{"x", 1}}));

    auto id = curtail_prefix(w, {"x", "y"}, {0, 1, 2, 3});
    REQUIRE(id.word);
    CHECK(id.word->size() == 4);
}

TEST_CASE("curtailment rejects blocks that change and bad indices")
{
    WordPrefix w{val({{"x", 0}}), val({{"x", 1}}), val({{"x", 1}})};
    auto r = curtail_prefix(w, {"x"}, {0});
    CHECK_FALSE(r.word);
    CHECK(r.violating_block == 0);
    auto r2 = curtail_prefix(w, {"x"}, {0, 1});
    CHECK(r2.word);
    CHECK_FALSE(curtail_prefix(w, {"x"}, {1}).word);
    CHECK_FALSE(curtail_prefix(w, {"x"}, {0, 3}).word);
    auto r3 = curtail_prefix(w, {"x"}, {0, 2, 1});
    CHECK_FALSE(r3.word);
    CHECK(r3.violating_block == 2);
    // Empty Y: everything is constant.
    CHECK(curtail_prefix(w, {}, {0}).word.has_value());
}

TEST_CASE("controller with the second train against the tgc assumptions")
{
    const auto m = tgc_controller_and_train2();
    auto b = gen_tgc(2);
    auto ok = guarantees(m, b.assumptions.at("A012"));
    CHECK(ok.holds);

    auto bad = guarantees(m, b.assumptions.at("A1"));
    REQUIRE_FALSE(bad.holds);
    REQUIRE(bad.word);
    REQUIRE_FALSE(bad.cex_loop.empty());
    const auto s = contracted_s(m, bad.cex_stem, bad.cex_loop, 3);
    CHECK(std::regex_match(s, std::regex("(0[12])*(02)+0?")));
    // The loop itself alternates 0 and 2 only.
    const auto l = contracted_s(m, {}, bad.cex_loop, 2);
    CHECK(l.find('1') == std::string::npos);
    CHECK(l.find('2') != std::string::npos);
    CHECK_FALSE(describe_trace(m, bad.cex_stem, bad.cex_loop).empty());
}

TEST_CASE("missing assumption variables are a model error")
{
    auto b = gen_tgc(2);
    CHECK_THROWS_AS(guarantees(b.system.agents[0].module, b.assumptions.at("A012")), ModelError);
}

TEST_CASE("a module guarantees itself with every state accepting")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto m = fuzz::random_module(rng, 2, {"v1"}, {"v2"}, 1 + i % 3, "q");
        Assumption a{"self", m, std::vector<bool>(m.state_count(), true)};
        CHECK(guarantees(m, a).holds);
    }
}

TEST_CASE("guarantee verdicts agree with lasso acceptance by the stutter expansion")
{
    std::mt19937 rng(11);
    int refuted = 0, confirmed = 0;
    for (int i = 0; i < 300; ++i) {
        fuzz::Shape sh;
        sh.min_agents = 2;
        sh.max_agents = 3;
        auto sys = fuzz::random_system(rng, sh);
        std::vector<Module> ms;
        for (const auto& ag : sys.agents)
            ms.push_back(atomize(ag.module));
        auto m = compose_all(ms);
        // Assumption over state variables of m only.
        auto a = fuzz::random_assumption(rng, 2, {"v2"}, {"v1"}, 2);
        const auto se = stutter_expand(a);
        auto r = guarantees(m, a);
        if (r.holds) {
            ++confirmed;
            oracle::module_lassos(m, 6, [&](const std::vector<StateId>& stem, const std::vector<StateId>& loop) {
                LassoWord w;
                for (auto q : stem)
                    w.stem.push_back(se.alphabet.letter_of(m.label(q)));
                for (auto q : loop)
                    w.loop.push_back(se.alphabet.letter_of(m.label(q)));
                if (!accepts(se, w))
                    FAIL("accepted guarantee but lasso rejected: " << describe_trace(m, stem, loop));
            });
        } else {
            ++refuted;
            REQUIRE(r.word);
            LassoWord w;
            for (auto q : r.cex_stem)
                w.stem.push_back(se.alphabet.letter_of(m.label(q)));
            for (auto q : r.cex_loop)
                w.loop.push_back(se.alphabet.letter_of(m.label(q)));
            CHECK_FALSE(accepts(se, w));
        }
    }
    CHECK(refuted > 0);
    CHECK(confirmed > 0);
}

TEST_CASE("guarantees are preserved when the neighborhood grows")
{
    std::mt19937 rng(23);
    int compared = 0;
    for (int i = 0; i < 400; ++i) {
        fuzz::Shape sh;
        sh.min_agents = 2;
        auto sys = fuzz::random_system(rng, sh);
        const std::size_t n = sys.agents.size();
        const std::size_t seed = static_cast<std::size_t>(rng() % n);
        VarList owned;
        for (std::size_t j = 0; j < n; ++j)
            if (j != seed)
                owned.push_back(fuzz::var_of(j));
        owned = make_var_list(owned);
        auto a = fuzz::random_assumption(rng, 2, VarList{owned.front()}, {fuzz::var_of(seed)}, 2);
        std::optional<bool> prev;
        for (int k = 1; k < static_cast<int>(n); ++k) {
            const auto nb = neighborhood(sys, {seed}, k);
            std::optional<bool> cur;
            try {
                cur = guarantees(comp_module(sys, nb), a).holds;
            } catch (const ModelError&) {
                cur.reset();
            }
            if (prev && *prev && cur) {
                CHECK(*cur);
                ++compared;
            }
            if (cur)
                prev = cur;
        }
    }
    CHECK(compared > 0);
}
