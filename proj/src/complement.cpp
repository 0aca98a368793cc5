// Rank-based complementation with tight level rankings.

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "agv/omega.hpp"

namespace agv
{

namespace
{

constexpr char kSubset = 'S';
constexpr char kRanked = 'R';
constexpr char kSink = 'K';
constexpr unsigned char kAbsent = 0;

} // namespace

ComplementGraph::ComplementGraph(const BuchiAutomaton& a0)
{
    const auto a = to_state_based(a0);
    alphabet_ = a.alphabet;
    n_ = a.state_count();
    if (n_ > 120)
        throw AutomatonTooLarge("automaton too large to complement (" + std::to_string(n_) + " states)");
    final_ = a.accepting;
    init_ = a.initial;
    const auto letters = alphabet_.size();
    delta_.assign(n_, std::vector<std::vector<StateId>>(letters));
    for (const auto& e : a.edges)
        for (auto l : e.letters.letters())
            delta_[e.from][l].push_back(e.to);
    for (auto& row : delta_)
        for (auto& v : row) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
}

ComplementGraph::Key ComplementGraph::initial() const
{
    Key k(1 + n_, '\0');
    k[0] = kSubset;
    for (auto q : init_)
        k[1 + q] = 1;
    return k;
}

bool ComplementGraph::accepting(const Key& k) const
{
    if (k[0] == kSink)
        return true;
    if (k[0] != kRanked)
        return false;
    for (std::size_t q = 0; q < n_; ++q)
        if (k[1 + n_ + q])
            return false;
    return true;
}

std::string ComplementGraph::describe(const Key& k) const
{
    if (k[0] == kSink)
        return "sink";
    std::string s = k[0] == kSubset ? "S{" : "R{";
    for (std::size_t q = 0; q < n_; ++q) {
        auto v = static_cast<unsigned char>(k[1 + q]);
        if (v == kAbsent)
            continue;
        s += std::to_string(q);
        if (k[0] == kRanked) {
            s += ":" + std::to_string(v - 1);
            if (k[1 + n_ + q])
                s += "*";
        }
        s += " ";
    }
    return s + "}";
}

std::vector<ComplementGraph::Key> ComplementGraph::successors(const Key& k, Letter l) const
{
    std::vector<Key> out;
    if (k[0] == kSink) {
        out.push_back(k);
        return out;
    }
    // Image of the current level and per-target rank bounds.
    std::vector<int> bound(n_, -1);
    std::vector<bool> in_o(n_, false);
    int max_rank = -1;
    for (std::size_t p = 0; p < n_; ++p) {
        auto v = static_cast<unsigned char>(k[1 + p]);
        if (v == kAbsent)
            continue;
        int rank = k[0] == kRanked ? v - 1 : 2 * static_cast<int>(n_) - 1;
        max_rank = std::max(max_rank, rank);
        for (auto t : delta_[p][l]) {
            bound[t] = bound[t] < 0 ? rank : std::min(bound[t], rank);
            if (k[0] == kRanked && k[1 + n_ + p])
                in_o[t] = true;
        }
    }
    std::vector<StateId> level;
    for (std::size_t t = 0; t < n_; ++t)
        if (bound[t] >= 0)
            level.push_back(static_cast<StateId>(t));

    Key sink(1, kSink);
    if (k[0] == kSubset) {
        Key s(1 + n_, '\0');
        s[0] = kSubset;
        for (auto t : level)
            s[1 + t] = 1;
        out.push_back(s);
        if (level.empty()) {
            out.push_back(sink);
            return out;
        }
    } else if (level.empty()) {
        out.push_back(sink);
        return out;
    }

    const bool o_empty = k[0] != kRanked || std::none_of(k.begin() + 1 + static_cast<long>(n_), k.end(),
                                                         [](char c) { return c != 0; });
    auto emit = [&](const std::vector<int>& f, int top) {
        Key r(1 + 2 * n_, '\0');
        r[0] = kRanked;
        for (std::size_t i = 0; i < level.size(); ++i) {
            const auto t = level[i];
            r[1 + t] = static_cast<char>(f[i] + 1);
            if (k[0] == kSubset)
                continue;  // fresh breakpoint
            if (f[i] % 2 == 0 && (o_empty || in_o[t]))
                r[1 + n_ + t] = 1;
        }
        (void)top;
        out.push_back(std::move(r));
    };

    auto enumerate = [&](int top) {
        // All odd ranks 1..top must occur; accepting states take even ranks.
        const int odd_needed = (top + 1) / 2;
        std::vector<int> f(level.size(), 0);
        std::vector<int> odd_count(static_cast<std::size_t>(top + 1), 0);
        int missing = odd_needed;
        std::vector<int> free_suffix(level.size() + 1, 0);
        for (std::size_t i = level.size(); i-- > 0;)
            free_suffix[i] = free_suffix[i + 1] + (final_[level[i]] ? 0 : 1);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (free_suffix[i] < missing)
                return;
            if (i == level.size()) {
                emit(f, top);
                return;
            }
            const auto t = level[i];
            const int hi = std::min(bound[t], top);
            for (int r = 0; r <= hi; ++r) {
                if (final_[t] && r % 2 == 1)
                    continue;
                f[i] = r;
                const bool fresh = r % 2 == 1 && odd_count[r]++ == 0;
                if (fresh)
                    --missing;
                rec(i + 1);
                if (r % 2 == 1 && --odd_count[r] == 0)
                    ++missing;
            }
        };
        rec(0);
    };

    if (k[0] == kSubset) {
        const auto free = std::count_if(level.begin(), level.end(), [&](StateId t) { return !final_[t]; });
        const int limit = 2 * static_cast<int>(free) - 1;
        for (int top = 1; top <= limit; top += 2)
            enumerate(top);
    } else {
        enumerate(max_rank);
    }
    return out;
}

BuchiAutomaton complement(const BuchiAutomaton& a, std::size_t cap)
{
    ComplementGraph g(a);
    BuchiAutomaton c;
    c.alphabet = g.alphabet();
    std::unordered_map<ComplementGraph::Key, StateId> ids;
    std::vector<ComplementGraph::Key> keys;
    auto id = [&](const ComplementGraph::Key& k) {
        auto it = ids.find(k);
        if (it != ids.end())
            return it->second;
        if (keys.size() >= cap)
            throw AutomatonTooLarge("assumption too large: complement exceeds " + std::to_string(cap) + " states");
        auto s = c.add_state(g.accepting(k));
        ids.emplace(k, s);
        keys.push_back(k);
        return s;
    };
    c.initial = {id(g.initial())};
    const auto letters = c.alphabet.size();
    for (std::size_t i = 0; i < keys.size(); ++i) {
        std::map<StateId, LetterSet> targets;
        for (Letter l = 0; l < letters; ++l)
            for (const auto& k : g.successors(keys[i], l)) {
                auto t = id(k);
                auto [it, _] = targets.try_emplace(t, LetterSet(letters));
                it->second.set(l);
            }
        for (auto& [t, ls] : targets)
            c.add_edge(static_cast<StateId>(i), std::move(ls), t);
    }
    return c;
}

} // namespace agv
