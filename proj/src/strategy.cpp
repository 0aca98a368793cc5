#include "agv/strategy.hpp"

#include <algorithm>

#include "agv/ndfs.hpp"
#include "objective.hpp"

namespace agv
{

double count_joint_strategies(const System& sys, const std::vector<std::size_t>& coalition)
{
    double n = 1;
    for (auto i : coalition)
        for (const auto& r : sys.agents.at(i).repertoire.choices)
            n *= static_cast<double>(r.size());
    return n;
}

StrategyEnumerator::StrategyEnumerator(const System& sys, std::vector<std::size_t> coalition)
    : coalition_(std::move(coalition))
{
    if (coalition_.empty())
        throw ModelError("empty coalition");
    current_.coalition = coalition_;
    for (auto i : coalition_) {
        const auto& r = sys.agents.at(i).repertoire.choices;
        std::vector<std::size_t> radix;
        for (const auto& c : r) {
            if (c.empty())
                throw ModelError("agent '" + sys.agents[i].name + "' has an empty repertoire entry");
            radix.push_back(c.size());
        }
        radix_.push_back(radix);
        current_.strategies.push_back({std::vector<std::size_t>(radix.size(), 0)});
    }
}

bool StrategyEnumerator::next(JointStrategy& out)
{
    if (done_)
        return false;
    if (!started_) {
        started_ = true;
        out = current_;
        return true;
    }
    // Least significant position is the last state of the last member.
    for (std::size_t m = coalition_.size(); m-- > 0;) {
        auto& ch = current_.strategies[m].choice;
        for (std::size_t q = ch.size(); q-- > 0;) {
            if (++ch[q] < radix_[m][q]) {
                out = current_;
                return true;
            }
            ch[q] = 0;
        }
    }
    done_ = true;
    return false;
}

std::vector<JointStrategy> enumerate_joint_strategies(const System& sys, const std::vector<std::size_t>& coalition,
                                                      std::size_t limit)
{
    StrategyEnumerator e(sys, coalition);
    std::vector<JointStrategy> out;
    JointStrategy s;
    while ((limit == 0 || out.size() < limit) && e.next(s))
        out.push_back(s);
    return out;
}

Arena make_arena(const System& sys, const Assumption* assumption)
{
    if (sys.agents.empty())
        throw ModelError("system without agents");
    Arena a;
    a.system = sys;
    std::vector<Module> ms;
    for (const auto& ag : sys.agents)
        ms.push_back(atomize(ag.module));
    if (assumption) {
        a.assumption = *assumption;
        ms.push_back(atomize(assumption->module));
    }
    a.module = compose_all(ms);
    if (a.module.parts.empty()) {
        a.module.parts.resize(a.module.state_count());
        for (StateId q = 0; q < a.module.state_count(); ++q)
            a.module.parts[q] = {q};
    }
    const auto n = sys.agents.size();
    if (assumption) {
        a.accepting.resize(a.module.state_count());
        for (StateId q = 0; q < a.module.state_count(); ++q)
            a.accepting[q] = assumption->accepting.at(a.module.parts[q][n]);
    }

    const auto& m = a.module;
    a.local_move.assign(m.transitions.size(), std::vector<std::int32_t>(n, -1));
    std::vector<std::vector<std::pair<bool, std::size_t>>> src(n);  // from letter / from label
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& v : sys.agents[i].module.input_vars) {
            if (auto k = var_index(m.input_vars, v))
                src[i].push_back({true, *k});
            else if (auto j = var_index(m.state_vars, v))
                src[i].push_back({false, *j});
            else
                throw ModelError("input '" + v + "' has no source in the arena");
        }
    const auto codec = m.input_codec();
    for (std::size_t t = 0; t < m.transitions.size(); ++t) {
        const auto& tr = m.transitions[t];
        const auto beta = codec.decode(tr.input);
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = m.parts[tr.from][i], p2 = m.parts[tr.to][i];
            if (p == p2)
                continue;
            const auto& lm = sys.agents[i].module;
            std::vector<Value> alpha;
            for (auto [from_letter, k] : src[i])
                alpha.push_back(from_letter ? beta[k] : m.labels[tr.from][k]);
            auto idx = lm.find_transition({p, lm.input_codec().encode(alpha), p2});
            if (!idx)
                throw std::logic_error("composite move without a local transition");
            a.local_move[t][i] = static_cast<std::int32_t>(*idx);
        }
    }
    return a;
}

namespace
{

bool choice_contains(const Agent& ag, StateId p, std::size_t choice, std::int32_t tid)
{
    const auto& set = ag.repertoire.choices.at(p).at(choice);
    const auto& t = ag.module.transitions[static_cast<std::size_t>(tid)];
    return std::find(set.begin(), set.end(), t) != set.end();
}

} // namespace

bool implements(const Arena& arena, std::size_t t, const JointStrategy& s)
{
    const auto from = arena.module.transitions[t].from;
    for (std::size_t k = 0; k < s.coalition.size(); ++k) {
        const auto i = s.coalition[k];
        const auto tid = arena.local_move[t][i];
        if (tid < 0)
            continue;
        const auto p = arena.local_state(from, i);
        if (!choice_contains(arena.system.agents[i], p, s.strategies[k].choice.at(p), tid))
            return false;
    }
    return true;
}

Module restrict_by_strategy(const Arena& arena, const JointStrategy& s)
{
    Module m = arena.module;
    std::vector<Transition> kept;
    for (std::size_t t = 0; t < m.transitions.size(); ++t)
        if (implements(arena, t, s))
            kept.push_back(m.transitions[t]);
    m.transitions = std::move(kept);
    m.finalize();
    return m;
}

namespace detail
{

Objective compile_objective(const Arena& arena, const FormulaPtr& g, const StateLabels* extra)
{
    if (has_coop(g))
        throw ModelError("objective must be an LTL formula");
    const auto& m = arena.module;
    Objective o;
    const auto vars = formula_vars(g);
    std::vector<std::pair<int, std::size_t>> src;  // 0 = state var, 1 = extra proposition
    for (const auto& v : vars) {
        o.alphabet.vars.push_back(v);
        if (auto j = var_index(m.state_vars, v)) {
            o.alphabet.sizes.push_back(m.domain);
            src.push_back({0, *j});
            continue;
        }
        bool found = false;
        if (extra)
            for (std::size_t k = 0; k < extra->names.size(); ++k)
                if (extra->names[k] == v) {
                    o.alphabet.sizes.push_back(2);
                    src.push_back({1, k});
                    found = true;
                }
        if (!found)
            throw ModelError("unknown variable '" + v + "' in objective");
    }
    o.neg = ltl_to_buchi(fml::neg(g), o.alphabet);
    o.letter.resize(m.state_count());
    std::vector<Value> buf(vars.size());
    for (StateId q = 0; q < m.state_count(); ++q) {
        for (std::size_t i = 0; i < src.size(); ++i)
            buf[i] = src[i].first == 0 ? m.labels[q][src[i].second] : (extra->values[src[i].second][q] ? 1 : 0);
        o.letter[q] = o.alphabet.encode(buf);
    }
    o.delta.assign(o.neg.state_count(), std::vector<std::vector<StateId>>(o.alphabet.size()));
    for (const auto& e : o.neg.edges)
        for (auto l : e.letters.letters())
            o.delta[e.from][l].push_back(e.to);
    return o;
}

StrategyCheck check_product(const Arena& arena, const Objective& o, StateId root, const MoveStatus& status)
{
    const auto& m = arena.module;
    const bool with_a = !arena.accepting.empty();
    using S = std::uint64_t;
    auto pack = [](StateId q, StateId b, unsigned phase) { return (S{q} << 32) | (S{b} << 1) | phase; };
    auto succ = [&](S s) {
        const auto q = static_cast<StateId>(s >> 32);
        const auto b = static_cast<StateId>((s >> 1) & 0x7fffffffU);
        const auto phase = static_cast<unsigned>(s & 1U);
        unsigned next = phase;
        if (phase == 0 && o.neg.accepting[b])
            next = with_a ? 1 : 0;
        else if (phase == 1 && arena.accepting[q])
            next = 0;
        std::vector<std::pair<StateId, S>> out;
        const auto& bs = o.delta[b][o.letter[q]];
        if (bs.empty())
            return out;
        const auto span = m.outgoing(q);
        const auto base = static_cast<std::size_t>(span.data() - m.transitions.data());
        for (std::size_t k = 0; k < span.size(); ++k) {
            if (status(base + k) != 1)
                continue;
            for (auto b2 : bs)
                out.emplace_back(q, pack(span[k].to, b2, next));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    auto acc = [&](S s) {
        return (s & 1U) == 0 && o.neg.accepting[static_cast<StateId>((s >> 1) & 0x7fffffffU)];
    };
    std::vector<S> init;
    for (auto b : o.neg.initial)
        init.push_back(pack(root, b, 0));
    auto path = nested_dfs<S, StateId, std::hash<S>>(init, succ, acc);
    StrategyCheck r;
    if (!path)
        return r;
    r.holds = false;
    for (auto s : path->stem_states)
        r.cex_stem.push_back(static_cast<StateId>(s >> 32));
    for (auto s : path->loop_states)
        r.cex_loop.push_back(static_cast<StateId>(s >> 32));
    try {
        auto alpha = Alphabet::uniform(m.state_vars, m.domain);
        LassoWord w;
        for (auto q : r.cex_stem)
            w.stem.push_back(alpha.encode(m.labels[q]));
        for (auto q : r.cex_loop)
            w.loop.push_back(alpha.encode(m.labels[q]));
        r.counterexample = std::move(w);
    } catch (const AutomatonTooLarge&) {
        // state path still reported
    }
    return r;
}

bool has_outcome(const Arena& arena, StateId root, const MoveStatus& status)
{
    const auto& m = arena.module;
    const auto n = m.state_count();
    std::vector<std::vector<StateId>> adj(n);
    for (StateId q = 0; q < n; ++q) {
        const auto span = m.outgoing(q);
        const auto base = static_cast<std::size_t>(span.data() - m.transitions.data());
        for (std::size_t k = 0; k < span.size(); ++k)
            if (status(base + k) == 1)
                adj[q].push_back(span[k].to);
    }
    // Iterative Tarjan from root; a non-trivial SCC with an accepting state is an outcome.
    constexpr std::uint32_t kUnseen = 0xffffffffU;
    std::vector<std::uint32_t> index(n, kUnseen), low(n, 0);
    std::vector<char> on(n, 0);
    std::vector<StateId> stack;
    std::vector<std::pair<StateId, std::size_t>> work{{root, 0}};
    std::uint32_t counter = 0;
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on[root] = 1;
    while (!work.empty()) {
        auto& [v, i] = work.back();
        if (i < adj[v].size()) {
            const auto w = adj[v][i++];
            if (index[w] == kUnseen) {
                index[w] = low[w] = counter++;
                stack.push_back(w);
                on[w] = 1;
                work.push_back({w, 0});
            } else if (on[w]) {
                low[v] = std::min(low[v], index[w]);
            }
            continue;
        }
        const auto done = v;
        work.pop_back();
        if (!work.empty())
            low[work.back().first] = std::min(low[work.back().first], low[done]);
        if (low[done] != index[done])
            continue;
        std::vector<StateId> comp;
        StateId x;
        do {
            x = stack.back();
            stack.pop_back();
            on[x] = 0;
            comp.push_back(x);
        } while (x != done);
        bool cyclic = comp.size() > 1;
        if (!cyclic)
            cyclic = std::find(adj[done].begin(), adj[done].end(), done) != adj[done].end();
        if (!cyclic)
            continue;
        if (arena.accepting.empty())
            return true;
        for (auto c : comp)
            if (arena.accepting[c])
                return true;
    }
    return false;
}

} // namespace detail

StrategyCheck holds_under_strategy(const Arena& arena, const JointStrategy& s, const FormulaPtr& g,
                                   std::optional<StateId> root, const StateLabels* extra)
{
    const auto o = detail::compile_objective(arena, g, extra);
    return detail::check_product(arena, o, root.value_or(arena.module.initial),
                                 [&](std::size_t t) { return implements(arena, t, s) ? 1 : 0; });
}

} // namespace agv
