#include "agv/core.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace agv
{

VarList make_var_list(std::vector<std::string> vars)
{
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

VarList var_union(const VarList& a, const VarList& b)
{
    VarList out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VarList var_intersection(const VarList& a, const VarList& b)
{
    VarList out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

VarList var_difference(const VarList& a, const VarList& b)
{
    VarList out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool var_subset(const VarList& a, const VarList& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool var_contains(const VarList& vars, const std::string& v)
{
    return std::binary_search(vars.begin(), vars.end(), v);
}

std::optional<std::size_t> var_index(const VarList& vars, const std::string& v)
{
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    if (it == vars.end() || *it != v)
        return std::nullopt;
    return static_cast<std::size_t>(it - vars.begin());
}

// ---------------------------------------------------------------------------

Valuation::Valuation(const VarList& vars, std::span<const Value> values)
{
    if (vars.size() != values.size())
        throw ModelError("valuation arity mismatch");
    for (std::size_t i = 0; i < vars.size(); ++i)
        values_.emplace(vars[i], values[i]);
}

Value Valuation::at(const std::string& var) const
{
    auto it = values_.find(var);
    if (it == values_.end())
        throw ModelError("variable '" + var + "' is not assigned");
    return it->second;
}

VarList Valuation::scope() const
{
    VarList out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_)
        out.push_back(k);
    return out;
}

Valuation Valuation::restricted_to(const VarList& vars) const
{
    Valuation out;
    for (const auto& [k, v] : values_)
        if (var_contains(vars, k))
            out.values_.emplace(k, v);
    return out;
}

std::vector<Value> Valuation::values_for(const VarList& vars) const
{
    std::vector<Value> out;
    out.reserve(vars.size());
    for (const auto& v : vars)
        out.push_back(at(v));
    return out;
}

std::string Valuation::to_string() const
{
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [k, v] : values_) {
        if (!first)
            os << ", ";
        first = false;
        os << k << '=' << v;
    }
    os << '}';
    return os.str();
}

bool compatible(const Valuation& a, const Valuation& b)
{
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (const auto& [k, v] : small.entries()) {
        auto it = large.entries().find(k);
        if (it != large.entries().end() && it->second != v)
            return false;
    }
    return true;
}

Valuation unite(const Valuation& a, const Valuation& b)
{
    if (!compatible(a, b))
        throw ModelError("incompatible valuations");
    Valuation out = a;
    for (const auto& [k, v] : b.entries())
        out.set(k, v);
    return out;
}

// ---------------------------------------------------------------------------

LetterCodec::LetterCodec(std::size_t vars, int domain) : vars_(vars), domain_(domain)
{
    if (domain < 1)
        throw ModelError("domain must contain at least one value");
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < vars; ++i) {
        c *= static_cast<std::uint64_t>(domain);
        if (c > (1u << 26))
            throw ModelError("input alphabet too large");
    }
    count_ = static_cast<Letter>(c);
}

Letter LetterCodec::encode(std::span<const Value> values) const
{
    Letter out = 0;
    Letter mult = 1;
    for (std::size_t i = 0; i < vars_; ++i) {
        if (values[i] < 0 || values[i] >= domain_)
            throw ModelError("value " + std::to_string(values[i]) + " outside domain");
        out += static_cast<Letter>(values[i]) * mult;
        mult *= static_cast<Letter>(domain_);
    }
    return out;
}

std::vector<Value> LetterCodec::decode(Letter letter) const
{
    std::vector<Value> out(vars_);
    for (std::size_t i = 0; i < vars_; ++i) {
        out[i] = static_cast<Value>(letter % static_cast<Letter>(domain_));
        letter /= static_cast<Letter>(domain_);
    }
    return out;
}

Value LetterCodec::digit(Letter letter, std::size_t var) const
{
    for (std::size_t i = 0; i < var; ++i)
        letter /= static_cast<Letter>(domain_);
    return static_cast<Value>(letter % static_cast<Letter>(domain_));
}

// ---------------------------------------------------------------------------

Valuation Module::input_valuation(Letter a) const
{
    auto vals = input_codec().decode(a);
    return {input_vars, vals};
}

std::span<const Transition> Module::outgoing(StateId q) const
{
    if (offsets_.size() != state_count() + 1)
        throw std::logic_error("module used before finalize()");
    return std::span<const Transition>(transitions).subspan(offsets_[q], offsets_[q + 1] - offsets_[q]);
}

std::vector<StateId> Module::successors(StateId q, Letter input) const
{
    std::vector<StateId> out;
    for (const auto& t : outgoing(q))
        if (t.input == input)
            out.push_back(t.to);
    return out;
}

std::optional<std::size_t> Module::find_transition(const Transition& t) const
{
    auto it = std::lower_bound(transitions.begin(), transitions.end(), t);
    if (it == transitions.end() || *it != t)
        return std::nullopt;
    return static_cast<std::size_t>(it - transitions.begin());
}

std::optional<StateId> Module::find_state(const std::string& name) const
{
    for (StateId q = 0; q < state_names.size(); ++q)
        if (state_names[q] == name)
            return q;
    return std::nullopt;
}

void Module::finalize()
{
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
    offsets_.assign(state_count() + 1, 0);
    for (const auto& t : transitions) {
        if (t.from >= state_count() || t.to >= state_count())
            throw ModelError("transition refers to unknown state");
        ++offsets_[t.from + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
}

Repertoire Repertoire::singletons(const Module& m)
{
    Repertoire r;
    r.choices.resize(m.state_count());
    for (StateId q = 0; q < m.state_count(); ++q)
        for (const auto& t : m.outgoing(q))
            r.choices[q].push_back({t});
    return r;
}

std::size_t System::resolve_agent(const std::string& ref) const
{
    for (std::size_t i = 0; i < agents.size(); ++i)
        if (agents[i].name == ref)
            return i;
    if (!ref.empty() && std::all_of(ref.begin(), ref.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        auto idx = std::stoul(ref);
        if (idx >= 1 && idx <= agents.size())
            return idx - 1;
    }
    throw ModelError("unknown agent '" + ref + "'");
}

// ---------------------------------------------------------------------------

std::vector<Violation> validate_module(const Module& m)
{
    std::vector<Violation> out;
    auto shared = var_intersection(m.state_vars, m.input_vars);
    for (const auto& v : shared)
        out.push_back({"disjoint", "variable '" + v + "' is both a state and an input variable"});
    if (m.state_count() == 0) {
        out.push_back({"a", "module has no states"});
        return out;
    }
    if (m.initial >= m.state_count())
        out.push_back({"label", "initial state out of range"});
    if (m.labels.size() != m.state_count())
        out.push_back({"label", "labeling is not total"});
    for (StateId q = 0; q < m.labels.size(); ++q) {
        if (m.labels[q].size() != m.state_vars.size())
            out.push_back({"label", "state '" + m.state_names[q] + "' label has wrong scope"});
        for (Value v : m.labels[q])
            if (v < 0 || v >= m.domain)
                out.push_back({"label", "state '" + m.state_names[q] + "' label value outside domain"});
    }
    const auto codec = m.input_codec();
    for (StateId q = 0; q < m.state_count(); ++q) {
        std::vector<std::vector<StateId>> by_input(codec.count());
        for (const auto& t : m.outgoing(q))
            by_input[t.input].push_back(t.to);
        for (Letter a = 0; a < codec.count(); ++a) {
            const auto& targets = by_input[a];
            if (targets.empty()) {
                out.push_back({"a", "no transition from '" + m.state_names[q] + "' on input " +
                                        m.input_valuation(a).to_string()});
                continue;
            }
            bool loop = std::find(targets.begin(), targets.end(), q) != targets.end();
            if (loop && targets.size() > 1)
                out.push_back({"b", "redundant self-loop at '" + m.state_names[q] + "' on input " +
                                        m.input_valuation(a).to_string()});
        }
    }
    return out;
}

std::vector<Violation> validate_repertoire(const Module& m, const Repertoire& r)
{
    std::vector<Violation> out;
    if (r.choices.size() != m.state_count()) {
        out.push_back({"repertoire", "repertoire is not total"});
        return out;
    }
    for (StateId q = 0; q < m.state_count(); ++q) {
        if (r.choices[q].empty())
            out.push_back({"repertoire", "empty choice collection at '" + m.state_names[q] + "'"});
        for (const auto& set : r.choices[q]) {
            if (set.empty())
                out.push_back({"repertoire", "empty choice at '" + m.state_names[q] + "'"});
            for (const auto& t : set) {
                if (t.from != q)
                    out.push_back({"repertoire", "choice at '" + m.state_names[q] + "' has a foreign transition"});
                else if (!m.find_transition(t))
                    out.push_back({"repertoire", "choice at '" + m.state_names[q] + "' names a missing transition"});
            }
        }
    }
    return out;
}

std::vector<Violation> validate_system(const System& sys)
{
    std::vector<Violation> out;
    for (std::size_t i = 0; i < sys.agents.size(); ++i) {
        const auto& a = sys.agents[i];
        for (auto v : validate_module(a.module)) {
            v.message = a.name + ": " + v.message;
            out.push_back(std::move(v));
        }
        for (auto v : validate_repertoire(a.module, a.repertoire)) {
            v.message = a.name + ": " + v.message;
            out.push_back(std::move(v));
        }
        for (std::size_t j = i + 1; j < sys.agents.size(); ++j)
            for (const auto& v : var_intersection(a.module.state_vars, sys.agents[j].module.state_vars))
                out.push_back({"disjoint", "agents '" + a.name + "' and '" + sys.agents[j].name +
                                               "' share state variable '" + v + "'"});
    }
    return out;
}

Module complete_inputs(Module m)
{
    m.finalize();
    const auto codec = m.input_codec();
    std::vector<Transition> added;
    std::vector<char> seen(codec.count());
    for (StateId q = 0; q < m.state_count(); ++q) {
        std::fill(seen.begin(), seen.end(), 0);
        for (const auto& t : m.outgoing(q))
            seen[t.input] = 1;
        for (Letter a = 0; a < codec.count(); ++a)
            if (!seen[a])
                added.push_back({q, a, q});
    }
    if (!added.empty()) {
        m.transitions.insert(m.transitions.end(), added.begin(), added.end());
        m.finalize();
    }
    return m;
}

Module atomize(Module m)
{
    m.parts.clear();
    return m;
}

Module unit_module(int domain)
{
    Module m;
    m.domain = domain;
    m.state_names = {"unit"};
    m.labels = {{}};
    m.transitions = {{0, 0, 0}};
    m.finalize();
    return m;
}

namespace
{

std::vector<StateId> parts_of(const Module& m, StateId q)
{
    if (m.parts.empty())
        return {q};
    return m.parts[q];
}

// Source of each variable in a derived input letter: the composite letter or a component label.
struct InputSource
{
    bool from_letter = false;
    std::size_t index = 0;
};

std::vector<InputSource> input_sources(const VarList& local_inputs, const VarList& composite_inputs,
                                       const VarList& other_state_vars)
{
    std::vector<InputSource> out;
    for (const auto& v : local_inputs) {
        if (auto i = var_index(composite_inputs, v))
            out.push_back({true, *i});
        else if (auto j = var_index(other_state_vars, v))
            out.push_back({false, *j});
        else
            throw std::logic_error("input variable '" + v + "' has no source");
    }
    return out;
}

} // namespace

Module compose_pair(const Module& m1, const Module& m2)
{
    if (m1.domain != m2.domain)
        throw ModelError("modules use different domains");
    if (!var_intersection(m1.state_vars, m2.state_vars).empty())
        throw ModelError("not asynchronous");

    Module m;
    m.domain = m1.domain;
    m.state_vars = var_union(m1.state_vars, m2.state_vars);
    m.input_vars = var_difference(var_union(m1.input_vars, m2.input_vars), m.state_vars);

    const std::size_t n1 = m1.state_count();
    const std::size_t n2 = m2.state_count();
    auto id = [n2](StateId a, StateId b) { return static_cast<StateId>(a * n2 + b); };

    m.state_names.resize(n1 * n2);
    m.labels.resize(n1 * n2);
    m.parts.resize(n1 * n2);
    for (StateId a = 0; a < n1; ++a)
        for (StateId b = 0; b < n2; ++b) {
            StateId p = id(a, b);
            m.state_names[p] = m1.state_names[a] + "," + m2.state_names[b];
            auto lab = unite(m1.label(a), m2.label(b));
            m.labels[p] = lab.values_for(m.state_vars);
            auto pa = parts_of(m1, a);
            auto pb = parts_of(m2, b);
            pa.insert(pa.end(), pb.begin(), pb.end());
            m.parts[p] = std::move(pa);
        }
    m.initial = id(m1.initial, m2.initial);

    const auto codec = m.input_codec();
    const auto codec1 = m1.input_codec();
    const auto codec2 = m2.input_codec();
    const auto src1 = input_sources(m1.input_vars, m.input_vars, m2.state_vars);
    const auto src2 = input_sources(m2.input_vars, m.input_vars, m1.state_vars);

    std::vector<Value> alpha1(m1.input_vars.size()), alpha2(m2.input_vars.size());
    std::vector<StateId> targets;
    for (StateId a = 0; a < n1; ++a)
        for (StateId b = 0; b < n2; ++b) {
            const StateId p = id(a, b);
            for (Letter beta = 0; beta < codec.count(); ++beta) {
                const auto bv = codec.decode(beta);
                for (std::size_t k = 0; k < src1.size(); ++k)
                    alpha1[k] = src1[k].from_letter ? bv[src1[k].index] : m2.labels[b][src1[k].index];
                for (std::size_t k = 0; k < src2.size(); ++k)
                    alpha2[k] = src2[k].from_letter ? bv[src2[k].index] : m1.labels[a][src2[k].index];
                const auto succ1 = m1.successors(a, codec1.encode(alpha1));
                const auto succ2 = m2.successors(b, codec2.encode(alpha2));
                targets.clear();
                // ASYN_L, ASYN_R and SYN all require a matching move on both sides.
                if (!succ1.empty() && !succ2.empty()) {
                    for (StateId a2 : succ1)
                        targets.push_back(id(a2, b));
                    for (StateId b2 : succ2)
                        targets.push_back(id(a, b2));
                    for (StateId a2 : succ1)
                        for (StateId b2 : succ2)
                            targets.push_back(id(a2, b2));
                }
                std::sort(targets.begin(), targets.end());
                targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
                if (targets.size() > 1)
                    targets.erase(std::remove(targets.begin(), targets.end(), p), targets.end());
                for (StateId t : targets)
                    m.transitions.push_back({p, beta, t});
            }
        }
    return complete_inputs(std::move(m));
}

Module compose_all(std::span<const Module> modules)
{
    if (modules.empty())
        throw ModelError("cannot compose an empty list of modules");
    Module acc = modules.front();
    acc.finalize();
    for (std::size_t i = 1; i < modules.size(); ++i)
        acc = reachable(compose_pair(acc, modules[i])).module;
    return acc;
}

ReachableInfo reachable(const Module& m)
{
    std::vector<char> seen(m.state_count(), 0);
    std::deque<StateId> queue{m.initial};
    seen[m.initial] = 1;
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop_front();
        for (const auto& t : m.outgoing(q))
            if (!seen[t.to]) {
                seen[t.to] = 1;
                queue.push_back(t.to);
            }
    }
    std::vector<StateId> renumber(m.state_count(), 0);
    Module r;
    r.domain = m.domain;
    r.state_vars = m.state_vars;
    r.input_vars = m.input_vars;
    for (StateId q = 0; q < m.state_count(); ++q) {
        if (!seen[q])
            continue;
        renumber[q] = static_cast<StateId>(r.state_names.size());
        r.state_names.push_back(m.state_names[q]);
        r.labels.push_back(m.labels[q]);
        if (!m.parts.empty())
            r.parts.push_back(m.parts[q]);
    }
    for (const auto& t : m.transitions)
        if (seen[t.from])
            r.transitions.push_back({renumber[t.from], t.input, renumber[t.to]});
    r.initial = renumber[m.initial];
    r.finalize();
    ReachableInfo info;
    info.states = r.state_count();
    info.transitions = r.transitions.size();
    info.module = std::move(r);
    return info;
}

Module reroot(Module m, StateId q)
{
    if (q >= m.state_count())
        throw ModelError("re-root state out of range");
    m.initial = q;
    m.finalize();
    return m;
}

bool isomorphic(const Module& a, const Module& b)
{
    if (a.state_count() != b.state_count() || a.transitions.size() != b.transitions.size() ||
        a.state_vars != b.state_vars || a.input_vars != b.input_vars || a.domain != b.domain)
        return false;
    const std::size_t n = a.state_count();

    // Signature: label plus sorted multiset of (input, target label).
    auto signature = [](const Module& m, StateId q) {
        std::vector<std::pair<Letter, std::vector<Value>>> out;
        for (const auto& t : m.outgoing(q))
            out.emplace_back(t.input, m.labels[t.to]);
        std::sort(out.begin(), out.end());
        return std::make_pair(m.labels[q], out);
    };
    std::vector<decltype(signature(a, 0))> sa(n), sb(n);
    for (StateId q = 0; q < n; ++q) {
        sa[q] = signature(a, q);
        sb[q] = signature(b, q);
    }
    if (sa[a.initial] != sb[b.initial])
        return false;

    std::vector<long> map_ab(n, -1), map_ba(n, -1);
    // Order the states of a by BFS from the initial state (then the rest).
    std::vector<StateId> order;
    {
        std::vector<char> seen(n, 0);
        std::deque<StateId> queue{a.initial};
        seen[a.initial] = 1;
        while (!queue.empty()) {
            StateId q = queue.front();
            queue.pop_front();
            order.push_back(q);
            for (const auto& t : a.outgoing(q))
                if (!seen[t.to]) {
                    seen[t.to] = 1;
                    queue.push_back(t.to);
                }
        }
        for (StateId q = 0; q < n; ++q)
            if (!seen[q])
                order.push_back(q);
    }

    auto consistent = [&](StateId qa, StateId qb) {
        // Every already-mapped edge must correspond.
        for (const auto& t : a.outgoing(qa))
            if (map_ab[t.to] >= 0 && !b.find_transition({qb, t.input, static_cast<StateId>(map_ab[t.to])}))
                return false;
        for (const auto& t : b.outgoing(qb))
            if (map_ba[t.to] >= 0 && !a.find_transition({qa, t.input, static_cast<StateId>(map_ba[t.to])}))
                return false;
        return true;
    };

    std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
        if (k == order.size())
            return true;
        StateId qa = order[k];
        for (StateId qb = 0; qb < n; ++qb) {
            if (map_ba[qb] >= 0 || sa[qa] != sb[qb])
                continue;
            if (qa == a.initial && qb != b.initial)
                continue;
            map_ab[qa] = qb;
            map_ba[qb] = qa;
            // Self-edges need checking once both ends are mapped (covered in consistent()).
            if (consistent(qa, qb) && search(k + 1))
                return true;
            map_ab[qa] = -1;
            map_ba[qb] = -1;
        }
        return false;
    };
    return search(0);
}

} // namespace agv
