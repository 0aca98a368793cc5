#include "agv/guarantee.hpp"

#include <cstring>

#include "agv/ndfs.hpp"

namespace agv
{

CurtailResult curtail_prefix(const WordPrefix& w, const VarList& y, const std::vector<std::size_t>& c)
{
    CurtailResult r;
    if (c.empty() || c.front() != 0) {
        r.reason = "index sequence must start at 0";
        return r;
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] >= w.size() || (i && c[i] <= c[i - 1])) {
            r.violating_block = i;
            r.reason = "indices must be strictly increasing and inside the word";
            return r;
        }
    }
    WordPrefix out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto end = i + 1 < c.size() ? c[i + 1] : w.size();
        const auto rep = w[c[i]].restricted_to(y);
        for (auto k = c[i] + 1; k < end; ++k)
            if (w[k].restricted_to(y) != rep) {
                r.violating_block = i;
                r.reason = "block " + std::to_string(i) + " changes at position " + std::to_string(k);
                return r;
            }
        out.push_back(rep);
    }
    r.word = std::move(out);
    return r;
}

namespace
{

bool all_accepting(const Assumption& a)
{
    for (bool b : a.accepting)
        if (!b)
            return false;
    return true;
}

} // namespace

GuaranteeResult guarantees(const Module& m, const Assumption& a, const GuaranteeOptions& opts)
{
    const auto& am = a.module;
    if (a.accepting.size() != am.state_count())
        throw ModelError("assumption '" + a.name + "' has no acceptance flag for some state");
    if (!var_subset(am.state_vars, m.state_vars))
        throw ModelError("module does not own every state variable of assumption '" + a.name + "'");

    GuaranteeResult res;
    // Reflexive case: the module's own all-accepting copy.
    if (all_accepting(a) && am.state_vars == m.state_vars && am.input_vars == m.input_vars && isomorphic(m, am)) {
        res.alphabet = Alphabet::uniform(var_union(am.state_vars, am.input_vars), am.domain);
        return res;
    }

    auto se = reduce(trim(stutter_expand(a)));
    res.alphabet = se.alphabet;
    ComplementGraph cg(se);

    // Where each alphabet position is read from: state label or input letter of m.
    std::vector<std::pair<bool, std::size_t>> src;
    for (const auto& v : cg.alphabet().vars) {
        if (auto j = var_index(m.state_vars, v))
            src.push_back({false, *j});
        else if (auto k = var_index(m.input_vars, v))
            src.push_back({true, *k});
        else
            throw ModelError("variable '" + v + "' of assumption '" + a.name + "' is not provided by the module");
    }
    const auto codec = m.input_codec();
    std::vector<Letter> emit(m.transitions.size());
    std::vector<Value> buf(src.size());
    for (std::size_t t = 0; t < m.transitions.size(); ++t) {
        const auto& tr = m.transitions[t];
        const auto beta = codec.decode(tr.input);
        for (std::size_t i = 0; i < src.size(); ++i) {
            buf[i] = src[i].first ? beta[src[i].second] : m.labels[tr.from][src[i].second];
            if (buf[i] >= am.domain)
                throw ModelError("value out of the assumption's domain");
        }
        emit[t] = cg.alphabet().encode(buf);
    }

    // Product state: 4 bytes of m-state followed by the complement key.
    using S = std::string;
    auto pack = [](StateId q, const std::string& k) {
        S s(4, '\0');
        std::memcpy(s.data(), &q, 4);
        s += k;
        return s;
    };
    auto unpack_q = [](const S& s) {
        StateId q;
        std::memcpy(&q, s.data(), 4);
        return q;
    };
    std::size_t seen = 0;
    auto succ = [&](const S& s) {
        const auto q = unpack_q(s);
        const auto key = s.substr(4);
        std::vector<std::pair<std::size_t, S>> out;
        const auto span = m.outgoing(q);
        const auto base = static_cast<std::size_t>(span.data() - m.transitions.data());
        for (std::size_t k = 0; k < span.size(); ++k)
            for (auto& k2 : cg.successors(key, emit[base + k]))
                out.emplace_back(base + k, pack(span[k].to, k2));
        ++seen;
        return out;
    };
    auto acc = [&](const S& s) { return cg.accepting(s.substr(4)); };

    std::optional<LassoPath<S, std::size_t>> path;
    try {
        path = nested_dfs<S, std::size_t, std::hash<S>>({pack(m.initial, cg.initial())}, succ, acc, opts.state_limit);
    } catch (const SearchLimitExceeded&) {
        throw AutomatonTooLarge("assumption too large: guarantee search for '" + a.name + "' exceeded " +
                                std::to_string(opts.state_limit) + " states");
    }
    res.product_states = seen;
    if (!path)
        return res;
    res.holds = false;
    LassoWord w;
    for (std::size_t i = 0; i < path->stem_states.size(); ++i) {
        res.cex_stem.push_back(unpack_q(path->stem_states[i]));
        w.stem.push_back(emit[path->stem_labels[i]]);
    }
    for (std::size_t i = 0; i < path->loop_states.size(); ++i) {
        res.cex_loop.push_back(unpack_q(path->loop_states[i]));
        w.loop.push_back(emit[path->loop_labels[i]]);
    }
    res.word = std::move(w);
    return res;
}

std::string describe_trace(const Module& m, const std::vector<StateId>& stem, const std::vector<StateId>& loop)
{
    std::string out;
    for (auto q : stem)
        out += m.state_names.at(q) + " ";
    out += "(";
    for (std::size_t i = 0; i < loop.size(); ++i)
        out += (i ? " " : "") + m.state_names.at(loop[i]);
    return out + ")^w";
}

} // namespace agv
