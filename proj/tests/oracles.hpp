#pragma once

// Reference implementations used only to cross-check the library.

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "agv/core.hpp"
#include "agv/logic.hpp"

namespace oracle
{

using agv::FormulaPtr;
using agv::Op;
using agv::Valuation;

// Truth of an LTL formula at every position of a lasso (positions >= stem wrap around).
inline std::vector<bool> eval_positions(const FormulaPtr& f, const std::vector<Valuation>& pos, std::size_t stem)
{
    const std::size_t n = pos.size();
    auto nxt = [&](std::size_t i) { return i + 1 < n ? i + 1 : stem; };
    std::vector<bool> r(n);
    switch (f->op) {
    case Op::True: r.assign(n, true); break;
    case Op::False: r.assign(n, false); break;
    case Op::Atom:
        for (std::size_t i = 0; i < n; ++i) {
            bool ok = true;
            for (const auto& [k, v] : f->atom.entries())
                ok = ok && pos[i].at(k) == v;
            r[i] = ok;
        }
        break;
    case Op::Not: {
        auto a = eval_positions(f->lhs, pos, stem);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = !a[i];
        break;
    }
    case Op::And:
    case Op::Or:
    case Op::Implies: {
        auto a = eval_positions(f->lhs, pos, stem);
        auto b = eval_positions(f->rhs, pos, stem);
        for (std::size_t i = 0; i < n; ++i)
            r[i] = f->op == Op::And ? (a[i] && b[i]) : f->op == Op::Or ? (a[i] || b[i]) : (!a[i] || b[i]);
        break;
    }
    case Op::Until:
    case Op::Finally: {
        std::vector<bool> a(n, true);
        if (f->op == Op::Until)
            a = eval_positions(f->lhs, pos, stem);
        auto b = eval_positions(f->op == Op::Until ? f->rhs : f->lhs, pos, stem);
        r.assign(n, false);
        for (std::size_t round = 0; round <= n; ++round)
            for (std::size_t i = n; i-- > 0;)
                r[i] = b[i] || (a[i] && r[nxt(i)]);
        break;
    }
    case Op::Globally: {
        auto a = eval_positions(f->lhs, pos, stem);
        r.assign(n, true);
        for (std::size_t round = 0; round <= n; ++round)
            for (std::size_t i = n; i-- > 0;)
                r[i] = a[i] && r[nxt(i)];
        break;
    }
    case Op::Coop: throw std::runtime_error("oracle: strategic operator");
    }
    return r;
}

inline bool holds_on_lasso(const FormulaPtr& f, const std::vector<Valuation>& stem, const std::vector<Valuation>& loop)
{
    std::vector<Valuation> pos = stem;
    pos.insert(pos.end(), loop.begin(), loop.end());
    return eval_positions(f, pos, stem.size())[0];
}

// Every formula of exactly `size` nodes over the given leaves, unary and binary operators.
inline std::vector<FormulaPtr> all_formulas(std::size_t size, const std::vector<FormulaPtr>& leaves)
{
    using namespace agv::fml;
    std::vector<std::vector<FormulaPtr>> by(size + 1);
    if (size >= 1)
        by[1] = leaves;
    for (std::size_t s = 2; s <= size; ++s) {
        for (const auto& a : by[s - 1]) {
            by[s].push_back(neg(a));
            by[s].push_back(finally(a));
            by[s].push_back(globally(a));
        }
        for (std::size_t l = 1; l + 1 < s; ++l)
            for (const auto& a : by[l])
                for (const auto& b : by[s - 1 - l]) {
                    by[s].push_back(conj(a, b));
                    by[s].push_back(disj(a, b));
                    by[s].push_back(until(a, b));
                }
    }
    return by[size];
}

// Global states reachable when any non-empty set of modules steps together,
// each reading its inputs from the other modules' current labels.
inline std::size_t brute_reachable(const std::vector<agv::Module>& ms)
{
    using State = std::vector<agv::StateId>;
    const std::size_t n = ms.size();
    auto input_letter = [&](const State& s, std::size_t i) {
        std::vector<agv::Value> vals;
        for (const auto& v : ms[i].input_vars) {
            bool found = false;
            for (std::size_t j = 0; j < n && !found; ++j)
                if (auto k = agv::var_index(ms[j].state_vars, v)) {
                    vals.push_back(ms[j].labels[s[j]][*k]);
                    found = true;
                }
            if (!found)
                throw std::runtime_error("oracle: open system");
        }
        return ms[i].input_codec().encode(vals);
    };
    State init;
    for (const auto& m : ms)
        init.push_back(m.initial);
    std::set<State> seen{init};
    std::vector<State> work{init};
    while (!work.empty()) {
        State s = work.back();
        work.pop_back();
        std::vector<std::vector<agv::StateId>> moves(n);
        for (std::size_t i = 0; i < n; ++i)
            moves[i] = ms[i].successors(s[i], input_letter(s, i));
        std::function<void(std::size_t, State&)> rec = [&](std::size_t i, State& t) {
            if (i == n) {
                if (seen.insert(t).second)
                    work.push_back(t);
                return;
            }
            rec(i + 1, t);  // module i idles
            for (auto q : moves[i]) {
                auto keep = t[i];
                t[i] = q;
                rec(i + 1, t);
                t[i] = keep;
            }
        };
        State t = s;
        rec(0, t);
    }
    return seen.size();
}

/// Calls f(stem, loop) for every lasso of m built from a simple path of at most
/// `max_len` states from the initial state closed by an edge back into the path.
template <class F>
void module_lassos(const agv::Module& m, std::size_t max_len, F&& f)
{
    std::vector<agv::StateId> path{m.initial};
    std::vector<char> on(m.state_count(), 0);
    on[m.initial] = 1;
    std::function<void()> rec = [&]() {
        const auto q = path.back();
        std::set<agv::StateId> succ;
        for (const auto& t : m.outgoing(q))
            succ.insert(t.to);
        for (auto t : succ) {
            if (on[t]) {
                const auto j = static_cast<std::size_t>(std::find(path.begin(), path.end(), t) - path.begin());
                f(std::vector<agv::StateId>(path.begin(), path.begin() + static_cast<long>(j)),
                  std::vector<agv::StateId>(path.begin() + static_cast<long>(j), path.end()));
            } else if (path.size() < max_len) {
                on[t] = 1;
                path.push_back(t);
                rec();
                path.pop_back();
                on[t] = 0;
            }
        }
    };
    rec();
}

/// Labels along a state sequence.
inline std::vector<agv::Valuation> labels_of(const agv::Module& m, const std::vector<agv::StateId>& qs)
{
    std::vector<agv::Valuation> out;
    for (auto q : qs)
        out.push_back(m.label(q));
    return out;
}

} // namespace oracle
