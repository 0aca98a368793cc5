#pragma once

// Nested depth-first search for accepting lassos in implicitly given graphs.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace agv
{

/// A lasso through a graph: stem states lead to loop_states.front(); the loop
/// returns to its first state. Labels are those of the edges leaving each state.
template <class State, class Label>
struct LassoPath
{
    std::vector<State> stem_states;
    std::vector<Label> stem_labels;
    std::vector<State> loop_states;
    std::vector<Label> loop_labels;
};

/// Thrown when a search exceeds its configured state budget.
class SearchLimitExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Nested DFS (Courcoubetis-Vardi-Wolper-Yannakakis with the stack check).
/// `succ(s)` returns a vector of (label, state) pairs; `accepting(s)` marks Büchi states.
template <class State, class Label, class Hash, class Succ, class Accepting>
std::optional<LassoPath<State, Label>> nested_dfs(const std::vector<State>& initial, Succ&& succ,
                                                  Accepting&& accepting, std::size_t limit = 0)
{
    struct Info
    {
        bool visited1 = false;
        bool visited2 = false;
        bool on_stack = false;
    };
    std::unordered_map<State, std::uint32_t, Hash> ids;
    std::vector<State> states;
    std::vector<Info> info;

    auto intern = [&](const State& s) -> std::uint32_t {
        auto [it, inserted] = ids.try_emplace(s, static_cast<std::uint32_t>(states.size()));
        if (inserted) {
            states.push_back(s);
            info.emplace_back();
            if (limit != 0 && states.size() > limit)
                throw SearchLimitExceeded("state budget exceeded");
        }
        return it->second;
    };

    struct Frame
    {
        std::uint32_t id;
        std::vector<std::pair<Label, std::uint32_t>> succ;
        std::size_t next = 0;
        Label label_in{};
    };

    auto expand = [&](std::uint32_t id) {
        std::vector<std::pair<Label, std::uint32_t>> out;
        State s = states[id];
        for (auto& [label, t] : succ(s)) {
            auto tid = intern(t);
            out.emplace_back(label, tid);
        }
        return out;
    };

    std::vector<Frame> outer;

    auto inner_search = [&](std::uint32_t seed) -> std::optional<LassoPath<State, Label>> {
        std::vector<Frame> inner;
        inner.push_back({seed, expand(seed), 0, Label{}});
        while (!inner.empty()) {
            auto& top = inner.back();
            if (top.next == top.succ.size()) {
                inner.pop_back();
                continue;
            }
            auto [label, t] = top.succ[top.next++];
            if (info[t].on_stack) {
                LassoPath<State, Label> path;
                std::size_t seed_pos = outer.size() - 1;
                std::size_t t_pos = 0;
                while (outer[t_pos].id != t)
                    ++t_pos;
                for (std::size_t i = 0; i < seed_pos; ++i) {
                    path.stem_states.push_back(states[outer[i].id]);
                    path.stem_labels.push_back(outer[i + 1].label_in);
                }
                for (std::size_t i = 0; i < inner.size(); ++i) {
                    path.loop_states.push_back(states[inner[i].id]);
                    path.loop_labels.push_back(i + 1 < inner.size() ? inner[i + 1].label_in : label);
                }
                if (t != seed) {
                    for (std::size_t i = t_pos; i < seed_pos; ++i) {
                        path.loop_states.push_back(states[outer[i].id]);
                        path.loop_labels.push_back(outer[i + 1].label_in);
                    }
                }
                return path;
            }
            if (!info[t].visited2) {
                info[t].visited2 = true;
                auto s = expand(t);
                inner.push_back({t, std::move(s), 0, label});
            }
        }
        return std::nullopt;
    };

    for (const auto& init : initial) {
        auto root = intern(init);
        if (info[root].visited1)
            continue;
        info[root].visited1 = true;
        info[root].on_stack = true;
        outer.push_back({root, expand(root), 0, Label{}});
        while (!outer.empty()) {
            auto& top = outer.back();
            if (top.next < top.succ.size()) {
                auto [label, t] = top.succ[top.next++];
                if (!info[t].visited1) {
                    info[t].visited1 = true;
                    info[t].on_stack = true;
                    auto s = expand(t);
                    outer.push_back({t, std::move(s), 0, label});
                }
                continue;
            }
            const auto id = top.id;
            if (accepting(states[id])) {
                if (auto found = inner_search(id))
                    return found;
            }
            info[id].on_stack = false;
            outer.pop_back();
        }
    }
    return std::nullopt;
}

} // namespace agv
