#include "agv/rules.hpp"

#include <algorithm>
#include <chrono>

namespace agv
{

Partition Partition::singletons(const AgentSet& coalition)
{
    Partition p;
    for (auto i : coalition)
        p.parts.push_back({i});
    return p;
}

AgentSet Partition::coalition() const
{
    AgentSet c;
    for (const auto& p : parts)
        c.insert(c.end(), p.begin(), p.end());
    std::sort(c.begin(), c.end());
    return c;
}

std::string Partition::check(std::size_t agents) const
{
    if (parts.empty())
        return "empty partition";
    std::vector<bool> used(agents, false);
    for (const auto& p : parts) {
        if (p.empty())
            return "empty part";
        for (auto i : p) {
            if (i >= agents)
                return "agent index " + std::to_string(i + 1) + " out of range";
            if (used[i])
                return "agent " + std::to_string(i + 1) + " appears in two parts";
            used[i] = true;
        }
    }
    return {};
}

namespace
{

bool interacts(const Module& a, const Module& b)
{
    return !var_intersection(a.input_vars, b.state_vars).empty() ||
           !var_intersection(b.input_vars, a.state_vars).empty();
}

AgentSet sorted(AgentSet s)
{
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

} // namespace

AgentSet neighborhood(const System& sys, const AgentSet& seed0, int k)
{
    if (k < 1)
        throw ModelError("neighborhood depth must be at least 1");
    const auto seed = sorted(seed0);
    for (auto i : seed)
        if (i >= sys.size())
            throw ModelError("agent index out of range");
    auto in_seed = [&](std::size_t j) { return std::binary_search(seed.begin(), seed.end(), j); };
    std::vector<bool> in(sys.size(), false);
    std::vector<std::size_t> frontier = seed;
    for (int step = 0; step < k && !frontier.empty(); ++step) {
        std::vector<std::size_t> next;
        for (auto i : frontier)
            for (std::size_t j = 0; j < sys.size(); ++j)
                if (j != i && !in[j] && !in_seed(j) && interacts(sys.agents[i].module, sys.agents[j].module)) {
                    in[j] = true;
                    next.push_back(j);
                }
        frontier = std::move(next);
    }
    AgentSet out;
    for (std::size_t j = 0; j < sys.size(); ++j)
        if (in[j])
            out.push_back(j);
    return out;
}

Module comp_module(const System& sys, const AgentSet& indices)
{
    std::vector<Module> ms;
    for (auto i : sorted(indices))
        ms.push_back(atomize(sys.agents.at(i).module));
    if (ms.empty())
        return unit_module(sys.domain);
    return atomize(compose_all(ms));
}

Assumption trivial_assumption(const System& sys, const AgentSet& coalition)
{
    const auto c = sorted(coalition);
    AgentSet rest;
    for (std::size_t j = 0; j < sys.size(); ++j)
        if (!std::binary_search(c.begin(), c.end(), j))
            rest.push_back(j);
    Assumption a;
    a.name = "trivial";
    a.module = comp_module(sys, rest);
    a.accepting.assign(a.module.state_count(), true);
    return a;
}

const char* agv_verdict_name(AgvVerdict v)
{
    switch (v) {
    case AgvVerdict::Derived: return "derived";
    case AgvVerdict::PremiseFailed: return "premise-failed";
    default: return "error";
    }
}

std::size_t AgvReport::max_premise_states() const
{
    std::size_t m = 0;
    for (const auto& p : parts)
        m = std::max({m, p.strategy_states, p.guarantee_states});
    return m;
}

FormulaPtr rule_conclusion(const System& sys, const Partition& p, const std::vector<FormulaPtr>& objectives)
{
    std::vector<std::string> names;
    for (auto i : p.coalition())
        names.push_back(sys.agents.at(i).name);
    return fml::coop(names, fml::conj_all(objectives));
}

namespace
{

void premise_strategy(const System& sys, PartReport& pr, const Assumption& a, const RuleOptions& opts)
{
    System sub;
    sub.domain = sys.domain;
    VarList visible = a.module.state_vars;
    for (auto i : pr.agents) {
        sub.agents.push_back(sys.agents.at(i));
        visible = var_union(visible, sys.agents[i].module.state_vars);
    }
    const auto vars = formula_vars(pr.objective);
    const auto foreign = var_difference(vars, visible);
    if (!foreign.empty())
        throw RuleShapeError("objective '" + to_string(pr.objective) + "' mentions '" + foreign.front() +
                             "', which is not local to its part");
    const auto arena = make_arena(sub, &a);
    AgentSet local(sub.size());
    for (std::size_t i = 0; i < local.size(); ++i)
        local[i] = i;
    pr.strategy = synthesize(arena, local, pr.objective, opts.synthesis);
    pr.strategy_states = arena.module.state_count();
    pr.strategy_ok = pr.strategy.verdict == Verdict::True;
    // Report the witness with the system's agent indices.
    if (pr.strategy.witness)
        pr.strategy.witness->coalition = pr.agents;
}

bool guarantee_at(const System& sys, PartReport& pr, const Assumption& a, const AgentSet& coalition, int k,
                  const RuleOptions& opts)
{
    pr.k = k;
    pr.neighbors = neighborhood(sys, pr.agents, k);
    if (opts.exclude_coalition)
        std::erase_if(pr.neighbors,
                      [&](std::size_t j) { return std::binary_search(coalition.begin(), coalition.end(), j); });
    const auto start = std::chrono::steady_clock::now();
    const auto m = comp_module(sys, pr.neighbors);
    pr.guarantee_states = m.state_count();
    pr.guarantee_checked = true;
    try {
        pr.guarantee = guarantees(m, a, opts.guarantee);
        pr.guarantee_ok = pr.guarantee.holds;
        pr.error.clear();
    } catch (const ModelError& e) {
        // The neighbourhood does not even provide the assumption's variables.
        pr.guarantee = {};
        pr.guarantee.holds = false;
        pr.guarantee_ok = false;
        pr.error = e.what();
    }
    pr.guarantee_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return pr.guarantee_ok;
}

} // namespace

AgvReport apply_rule_part(const System& sys, const Partition& p, const std::vector<FormulaPtr>& objectives,
                          const std::vector<Assumption>& assumptions, const RuleOptions& opts)
{
    AgvReport rep;
    if (auto why = p.check(sys.size()); !why.empty()) {
        rep.message = "invalid partition: " + why;
        return rep;
    }
    if (objectives.size() != p.parts.size() || assumptions.size() != p.parts.size()) {
        rep.message = "need one objective and one assumption per part";
        return rep;
    }
    const auto coalition = p.coalition();
    bool all = true;
    try {
        for (std::size_t i = 0; i < p.parts.size(); ++i) {
            PartReport pr;
            pr.agents = sorted(p.parts[i]);
            pr.objective = objectives[i];
            pr.assumption = assumptions[i].name;
            premise_strategy(sys, pr, assumptions[i], opts);
            if (pr.strategy_ok || !opts.stop_at_first_failure) {
                const int kmax = opts.auto_k ? static_cast<int>(std::max<std::size_t>(sys.size(), 1)) : opts.k;
                for (int k = opts.auto_k ? 1 : opts.k; k <= kmax; ++k)
                    if (guarantee_at(sys, pr, assumptions[i], coalition, k, opts))
                        break;
            }
            all = all && pr.strategy_ok && pr.guarantee_ok;
            rep.parts.push_back(std::move(pr));
            if (!all && opts.stop_at_first_failure)
                break;
        }
    } catch (const RuleShapeError& e) {
        rep.verdict = AgvVerdict::Error;
        rep.message = e.what();
        return rep;
    } catch (const AutomatonTooLarge& e) {
        rep.verdict = AgvVerdict::Error;
        rep.message = e.what();
        return rep;
    } catch (const ModelError& e) {
        rep.verdict = AgvVerdict::Error;
        rep.message = e.what();
        return rep;
    }
    rep.verdict = all ? AgvVerdict::Derived : AgvVerdict::PremiseFailed;
    if (!all)
        for (std::size_t i = 0; i < rep.parts.size(); ++i) {
            const auto& pr = rep.parts[i];
            if (!pr.strategy_ok) {
                rep.message = "premise 1 failed for part " + std::to_string(i + 1);
                break;
            }
            if (!pr.guarantee_ok) {
                rep.message = "premise 2 failed for part " + std::to_string(i + 1);
                break;
            }
        }
    return rep;
}

AgvReport apply_rule_rk(const System& sys, const AgentSet& coalition, const std::vector<FormulaPtr>& objectives,
                        const std::vector<Assumption>& assumptions, const RuleOptions& opts)
{
    return apply_rule_part(sys, Partition::singletons(coalition), objectives, assumptions, opts);
}

} // namespace agv
