#include "agv/core.hpp"

#include <algorithm>

namespace agv
{

ModuleBuilder::ModuleBuilder(int domain, std::vector<std::string> state_vars, std::vector<std::string> input_vars)
{
    m_.domain = domain;
    m_.state_vars = make_var_list(std::move(state_vars));
    m_.input_vars = make_var_list(std::move(input_vars));
    if (!var_intersection(m_.state_vars, m_.input_vars).empty())
        throw ModelError("state and input variables overlap");
    (void)m_.input_codec();
}

StateId ModuleBuilder::add_state(const std::string& name, const Valuation& label)
{
    if (m_.find_state(name))
        throw ModelError("duplicate state '" + name + "'");
    if (label.scope() != m_.state_vars)
        throw ModelError("label of state '" + name + "' must assign exactly the state variables");
    for (const auto& [k, v] : label.entries())
        if (v < 0 || v >= m_.domain)
            throw ModelError("value " + std::to_string(v) + " of '" + k + "' outside domain");
    m_.state_names.push_back(name);
    m_.labels.push_back(label.values_for(m_.state_vars));
    return static_cast<StateId>(m_.state_names.size() - 1);
}

void ModuleBuilder::set_initial(StateId q)
{
    if (q >= m_.state_count())
        throw ModelError("initial state out of range");
    m_.initial = q;
    has_initial_ = true;
}

std::vector<Letter> ModuleBuilder::letters(const Guard& guard) const
{
    for (const auto& [var, vals] : guard) {
        if (!var_contains(m_.input_vars, var))
            throw ModelError("guard mentions '" + var + "', which is not an input variable");
        for (Value v : vals)
            if (v < 0 || v >= m_.domain)
                throw ModelError("guard value " + std::to_string(v) + " outside domain");
    }
    const auto codec = m_.input_codec();
    std::vector<Letter> out;
    for (Letter a = 0; a < codec.count(); ++a) {
        const auto vals = codec.decode(a);
        bool ok = true;
        for (std::size_t i = 0; i < m_.input_vars.size() && ok; ++i) {
            auto it = guard.find(m_.input_vars[i]);
            if (it != guard.end())
                ok = std::find(it->second.begin(), it->second.end(), vals[i]) != it->second.end();
        }
        if (ok)
            out.push_back(a);
    }
    return out;
}

void ModuleBuilder::add_transition(StateId from, StateId to, const Guard& guard)
{
    if (from >= m_.state_count() || to >= m_.state_count())
        throw ModelError("transition refers to unknown state");
    for (Letter a : letters(guard))
        m_.transitions.push_back({from, a, to});
}

Module ModuleBuilder::build(bool complete)
{
    if (m_.state_count() == 0)
        throw ModelError("module has no states");
    if (!has_initial_)
        m_.initial = 0;
    m_.finalize();
    return complete ? complete_inputs(m_) : m_;
}

} // namespace agv
