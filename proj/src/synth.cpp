#include <algorithm>
#include <chrono>

#include "agv/strategy.hpp"
#include "objective.hpp"

namespace agv
{

const char* verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "inconclusive";
    }
}

std::string to_string(const JointStrategy& s, const System& sys)
{
    std::string out;
    for (std::size_t k = 0; k < s.coalition.size(); ++k) {
        const auto& ag = sys.agents.at(s.coalition[k]);
        if (k)
            out += " ";
        out += ag.name + "{";
        for (std::size_t q = 0; q < s.strategies[k].choice.size(); ++q)
            out += (q ? "," : "") + ag.module.state_names[q] + "=" + std::to_string(s.strategies[k].choice[q]);
        out += "}";
    }
    return out;
}

namespace
{

using Clock = std::chrono::steady_clock;

class Search
{
public:
    Search(const Arena& arena, std::vector<std::size_t> coalition, const detail::Objective& obj, StateId root,
           const SynthesisOptions& opts)
        : arena_(arena), coalition_(std::move(coalition)), obj_(obj), root_(root), opts_(opts)
    {
        for (auto i : coalition_) {
            const auto& ag = arena.system.agents.at(i);
            choice_.emplace_back(ag.module.state_count(), -1);
            // Local transition ids per repertoire entry.
            std::vector<std::vector<std::vector<std::int32_t>>> sets(ag.module.state_count());
            for (StateId p = 0; p < ag.module.state_count(); ++p)
                for (const auto& c : ag.repertoire.choices.at(p)) {
                    std::vector<std::int32_t> ids;
                    for (const auto& t : c)
                        if (auto x = ag.module.find_transition(t))
                            ids.push_back(static_cast<std::int32_t>(*x));
                    std::sort(ids.begin(), ids.end());
                    sets[p].push_back(std::move(ids));
                }
            sets_.push_back(std::move(sets));
        }
    }

    // 1 = success, 0 = failure, -1 = budget exhausted
    int run()
    {
        const int r = rec();
        if (r == 1 || r == -1)
            return r;
        if (fallback_) {
            choice_ = *fallback_;
            vacuous = true;
            return 1;
        }
        return r;
    }

    JointStrategy witness() const
    {
        JointStrategy s;
        s.coalition = coalition_;
        for (const auto& ch : choice_) {
            IrStrategy st;
            for (auto c : ch)
                st.choice.push_back(c < 0 ? 0 : static_cast<std::size_t>(c));
            s.strategies.push_back(std::move(st));
        }
        return s;
    }

    std::size_t evaluated = 0;
    bool vacuous = false;
    StrategyCheck last;

    // After a vacuous win, how many more candidates to try for one with an outcome.
    static constexpr std::size_t kFallbackBudget = 20000;

private:
    const Arena& arena_;
    std::vector<std::size_t> coalition_;
    const detail::Objective& obj_;
    StateId root_;
    SynthesisOptions opts_;
    std::vector<std::vector<int>> choice_;
    std::vector<std::vector<std::vector<std::vector<std::int32_t>>>> sets_;
    std::optional<std::vector<std::vector<int>>> fallback_;
    std::size_t fallback_at_ = 0;

    // -1: some moving member is undefined; 0: forbidden; 1: allowed
    int status(std::size_t t) const
    {
        const auto from = arena_.module.transitions[t].from;
        for (std::size_t k = 0; k < coalition_.size(); ++k) {
            const auto i = coalition_[k];
            const auto tid = arena_.local_move[t][i];
            if (tid < 0)
                continue;
            const auto p = arena_.local_state(from, i);
            const int c = choice_[k][p];
            if (c < 0)
                return -1;
            const auto& ids = sets_[k][p][static_cast<std::size_t>(c)];
            if (!std::binary_search(ids.begin(), ids.end(), tid))
                return 0;
        }
        return 1;
    }

    // Smallest undefined (member, local state) that matters in the reachable part.
    std::optional<std::pair<std::size_t, StateId>> pending() const
    {
        const auto& m = arena_.module;
        std::vector<char> seen(m.state_count(), 0);
        std::vector<StateId> work{root_};
        seen[root_] = 1;
        std::optional<std::pair<std::size_t, StateId>> best;
        while (!work.empty()) {
            auto q = work.back();
            work.pop_back();
            const auto span = m.outgoing(q);
            const auto base = static_cast<std::size_t>(span.data() - m.transitions.data());
            for (std::size_t k = 0; k < span.size(); ++k) {
                const auto t = base + k;
                const int st = status(t);
                if (st < 0) {
                    for (std::size_t j = 0; j < coalition_.size(); ++j) {
                        const auto i = coalition_[j];
                        if (arena_.local_move[t][i] < 0)
                            continue;
                        const auto p = arena_.local_state(q, i);
                        if (choice_[j][p] < 0) {
                            std::pair<std::size_t, StateId> cand{j, p};
                            if (!best || cand < *best)
                                best = cand;
                        }
                    }
                    continue;
                }
                if (st == 1 && !seen[span[k].to]) {
                    seen[span[k].to] = 1;
                    work.push_back(span[k].to);
                }
            }
        }
        return best;
    }

    int rec()
    {
        if (opts_.max_strategies && evaluated >= opts_.max_strategies)
            return fallback_ ? 0 : -1;
        if (fallback_ && evaluated >= fallback_at_ + kFallbackBudget)
            return 0;
        ++evaluated;
        auto r = detail::check_product(arena_, obj_, root_, [&](std::size_t t) { return status(t); });
        if (!r.holds) {
            last = std::move(r);
            return 0;
        }
        auto p = pending();
        if (!p) {
            if (detail::has_outcome(arena_, root_, [&](std::size_t t) { return status(t); }))
                return 1;
            // Wins only because every run deadlocks; keep looking for a better witness.
            if (!fallback_) {
                fallback_ = choice_;
                fallback_at_ = evaluated;
            }
            return 0;
        }
        auto [k, q] = *p;
        const auto options = sets_[k][q].size();
        for (std::size_t c = 0; c < options; ++c) {
            choice_[k][q] = static_cast<int>(c);
            const int res = rec();
            if (res != 0)
                return res;
        }
        choice_[k][q] = -1;
        return 0;
    }
};

void fill_stats(VerificationResult& r, const Arena& arena, Clock::time_point start)
{
    r.stats.states = arena.module.state_count();
    r.stats.transitions = arena.module.transitions.size();
    r.stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
}

void set_counterexample(VerificationResult& r, const Arena& arena, const StrategyCheck& c)
{
    r.counterexample = c.counterexample;
    if (c.counterexample)
        r.cex_alphabet = Alphabet::uniform(arena.module.state_vars, arena.module.domain);
}

} // namespace

VerificationResult synthesize(const Arena& arena, const std::vector<std::size_t>& coalition0, const FormulaPtr& g,
                              const SynthesisOptions& opts, std::optional<StateId> root, const StateLabels* extra)
{
    const auto start = Clock::now();
    auto coalition = coalition0;
    std::sort(coalition.begin(), coalition.end());
    coalition.erase(std::unique(coalition.begin(), coalition.end()), coalition.end());
    for (auto i : coalition)
        if (i >= arena.agent_count())
            throw ModelError("coalition member out of range");
    const auto obj = detail::compile_objective(arena, g, extra);
    const StateId r0 = root.value_or(arena.module.initial);
    VerificationResult res;

    if (coalition.empty()) {
        auto c = detail::check_product(arena, obj, r0, [](std::size_t) { return 1; });
        res.verdict = c.holds ? Verdict::True : Verdict::False;
        res.stats.strategies = 1;
        if (!c.holds)
            set_counterexample(res, arena, c);
        fill_stats(res, arena, start);
        return res;
    }

    if (!opts.lazy) {
        StrategyEnumerator e(arena.system, coalition);
        JointStrategy s;
        StrategyCheck last;
        std::optional<JointStrategy> fallback;
        res.verdict = Verdict::False;
        while (e.next(s)) {
            if (opts.max_strategies && res.stats.strategies >= opts.max_strategies) {
                if (!fallback) {
                    res.verdict = Verdict::Inconclusive;
                    res.message = "strategy budget exhausted";
                }
                break;
            }
            ++res.stats.strategies;
            auto st = [&](std::size_t t) { return implements(arena, t, s) ? 1 : 0; };
            auto c = detail::check_product(arena, obj, r0, st);
            if (c.holds) {
                if (detail::has_outcome(arena, r0, st)) {
                    res.verdict = Verdict::True;
                    res.witness = s;
                    break;
                }
                if (!fallback)
                    fallback = s;
                continue;
            }
            last = std::move(c);
        }
        if (res.verdict != Verdict::True && fallback) {
            res.verdict = Verdict::True;
            res.witness = fallback;
            res.vacuous = true;
        }
        if (res.verdict == Verdict::False)
            set_counterexample(res, arena, last);
        fill_stats(res, arena, start);
        return res;
    }

    Search search(arena, coalition, obj, r0, opts);
    const int outcome = search.run();
    res.stats.strategies = search.evaluated;
    if (outcome == 1) {
        res.verdict = Verdict::True;
        res.witness = search.witness();
        res.vacuous = search.vacuous;
    } else if (outcome == 0) {
        res.verdict = Verdict::False;
        set_counterexample(res, arena, search.last);
    } else {
        res.verdict = Verdict::Inconclusive;
        res.message = "strategy budget exhausted";
    }
    fill_stats(res, arena, start);
    return res;
}

namespace
{

struct Labeler
{
    const Arena& arena;
    const SynthesisOptions& opts;
    StateLabels labels;
    bool inconclusive = false;
    std::size_t strategies = 0;

    FormulaPtr subst(const FormulaPtr& f)
    {
        if (!f)
            return f;
        if (f->op == Op::Coop) {
            auto body = subst(f->lhs);
            const auto coalition = resolve_coalition(*f, arena.system);
            std::vector<bool> truth(arena.module.state_count(), false);
            for (StateId q = 0; q < arena.module.state_count(); ++q) {
                auto r = synthesize(arena, coalition, body, opts, q, &labels);
                strategies += r.stats.strategies;
                if (r.verdict == Verdict::Inconclusive)
                    inconclusive = true;
                truth[q] = r.verdict == Verdict::True;
            }
            const auto name = "_coop" + std::to_string(labels.names.size());
            labels.names.push_back(name);
            labels.values.push_back(std::move(truth));
            return fml::atom(name, 1);
        }
        if (f->op == Op::True || f->op == Op::False || f->op == Op::Atom)
            return f;
        auto g = std::make_shared<Formula>(*f);
        g->lhs = subst(f->lhs);
        g->rhs = subst(f->rhs);
        return g;
    }
};

} // namespace

VerificationResult verify(const Arena& arena, const FormulaPtr& f, Semantics sem, const SynthesisOptions& opts)
{
    if (sem == Semantics::iR)
        throw ModelError("perfect-recall (iR) strategy synthesis is not supported");
    const auto start = Clock::now();
    switch (classify(f)) {
    case FormulaClass::LTL: return synthesize(arena, {}, f, opts);
    case FormulaClass::OneATLs: return synthesize(arena, resolve_coalition(*f, arena.system), f->lhs, opts);
    case FormulaClass::Nested: break;
    }
    Labeler lab{arena, opts, {}, false, 0};
    auto top = lab.subst(f);
    auto res = synthesize(arena, {}, top, opts, std::nullopt, &lab.labels);
    res.witness.reset();
    res.stats.strategies += lab.strategies;
    if (lab.inconclusive) {
        res.verdict = Verdict::Inconclusive;
        res.message = "a nested subformula was inconclusive";
        res.counterexample.reset();
    }
    fill_stats(res, arena, start);
    return res;
}

VerificationResult verify(const System& sys, const FormulaPtr& f, Semantics sem, const SynthesisOptions& opts)
{
    if (sem == Semantics::iR)
        throw ModelError("perfect-recall (iR) strategy synthesis is not supported");
    return verify(make_arena(sys), f, sem, opts);
}

} // namespace agv
