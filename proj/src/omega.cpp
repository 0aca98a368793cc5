#include "agv/omega.hpp"

#include <bit>
#include <deque>
#include <algorithm>
#include <map>

#include "agv/ndfs.hpp"

namespace agv
{

Alphabet Alphabet::uniform(const VarList& vars, int domain)
{
    Alphabet a;
    a.vars = vars;
    a.sizes.assign(vars.size(), domain);
    (void)a.size();
    return a;
}

Letter Alphabet::size() const
{
    std::uint64_t n = 1;
    for (int s : sizes) {
        n *= static_cast<std::uint64_t>(s);
        if (n > (std::uint64_t{1} << 24))
            throw AutomatonTooLarge("alphabet too large");
    }
    return static_cast<Letter>(n);
}

Letter Alphabet::encode(std::span<const Value> values) const
{
    Letter l = 0;
    for (std::size_t i = vars.size(); i-- > 0;)
        l = l * static_cast<Letter>(sizes[i]) + static_cast<Letter>(values[i]);
    return l;
}

std::vector<Value> Alphabet::decode(Letter l) const
{
    std::vector<Value> v(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
        v[i] = static_cast<Value>(l % sizes[i]);
        l /= sizes[i];
    }
    return v;
}

Value Alphabet::digit(Letter l, std::size_t var) const
{
    for (std::size_t i = 0; i < var; ++i)
        l /= sizes[i];
    return static_cast<Value>(l % sizes[var]);
}

std::optional<std::size_t> Alphabet::index(const std::string& var) const
{
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == var)
            return i;
    return std::nullopt;
}

Valuation Alphabet::valuation(Letter l) const
{
    Valuation v;
    auto d = decode(l);
    for (std::size_t i = 0; i < vars.size(); ++i)
        v.set(vars[i], d[i]);
    return v;
}

Letter Alphabet::letter_of(const Valuation& v) const
{
    std::vector<Value> d(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i)
        d[i] = v.at(vars[i]);
    return encode(d);
}

LetterSet::LetterSet(std::size_t n, bool full) : n_(n), w_((n + 63) / 64, full ? ~std::uint64_t{0} : 0)
{
    if (full && n % 64 != 0)
        w_.back() = (std::uint64_t{1} << (n % 64)) - 1;
}

LetterSet LetterSet::single(std::size_t n, Letter l)
{
    LetterSet s(n);
    s.set(l);
    return s;
}

bool LetterSet::any() const
{
    for (auto w : w_)
        if (w)
            return true;
    return false;
}

std::size_t LetterSet::count() const
{
    std::size_t c = 0;
    for (auto w : w_)
        c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

std::optional<Letter> LetterSet::first() const
{
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i])
            return static_cast<Letter>(i * 64 + static_cast<std::size_t>(std::countr_zero(w_[i])));
    return std::nullopt;
}

std::vector<Letter> LetterSet::letters() const
{
    std::vector<Letter> out;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        auto w = w_[i];
        while (w) {
            out.push_back(static_cast<Letter>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
            w &= w - 1;
        }
    }
    return out;
}

LetterSet LetterSet::complement() const
{
    LetterSet full(n_, true);
    for (std::size_t i = 0; i < w_.size(); ++i)
        full.w_[i] &= ~w_[i];
    return full;
}

LetterSet& LetterSet::operator&=(const LetterSet& o)
{
    for (std::size_t i = 0; i < w_.size(); ++i)
        w_[i] &= o.w_[i];
    return *this;
}

LetterSet& LetterSet::operator|=(const LetterSet& o)
{
    for (std::size_t i = 0; i < w_.size(); ++i)
        w_[i] |= o.w_[i];
    return *this;
}

StateId BuchiAutomaton::add_state(bool acc)
{
    accepting.push_back(acc);
    out.emplace_back();
    return static_cast<StateId>(accepting.size() - 1);
}

void BuchiAutomaton::add_edge(StateId from, LetterSet letters, StateId to, bool marked)
{
    if (letters.none())
        return;
    out[from].push_back(edges.size());
    edges.push_back({from, std::move(letters), to, marked});
}

std::vector<StateId> BuchiAutomaton::successors(StateId q, Letter l) const
{
    std::vector<StateId> r;
    for (auto e : out[q])
        if (edges[e].letters.test(l))
            r.push_back(edges[e].to);
    return r;
}

std::string to_string(const LassoWord& w, const Alphabet& a)
{
    auto part = [&](const std::vector<Letter>& ls) {
        std::string s;
        for (auto l : ls)
            s += a.valuation(l).to_string();
        return s;
    };
    return part(w.stem) + "(" + part(w.loop) + ")^w";
}

LetterSet atom_letters(const Valuation& atom, const Alphabet& alphabet)
{
    std::vector<std::pair<std::size_t, Value>> req;
    for (const auto& [k, v] : atom.entries()) {
        auto i = alphabet.index(k);
        if (!i)
            throw ModelError("unknown variable '" + k + "'");
        req.emplace_back(*i, v);
    }
    LetterSet s(alphabet.size());
    for (Letter l = 0; l < alphabet.size(); ++l) {
        bool ok = true;
        for (auto [i, v] : req)
            if (alphabet.digit(l, i) != v) {
                ok = false;
                break;
            }
        if (ok)
            s.set(l);
    }
    return s;
}

BuchiAutomaton universal_automaton(const Alphabet& alphabet)
{
    BuchiAutomaton a;
    a.alphabet = alphabet;
    auto q = a.add_state(true);
    a.initial = {q};
    a.add_edge(q, LetterSet(alphabet.size(), true), q);
    return a;
}

BuchiAutomaton extend_alphabet(const BuchiAutomaton& a, const Alphabet& bigger)
{
    std::vector<std::size_t> pos;
    for (const auto& v : a.alphabet.vars) {
        auto i = bigger.index(v);
        if (!i)
            throw ModelError("extend_alphabet: variable '" + v + "' missing");
        pos.push_back(*i);
    }
    std::vector<Letter> proj(bigger.size());
    std::vector<Value> small(pos.size());
    for (Letter l = 0; l < bigger.size(); ++l) {
        auto d = bigger.decode(l);
        for (std::size_t i = 0; i < pos.size(); ++i)
            small[i] = d[pos[i]];
        proj[l] = a.alphabet.encode(small);
    }
    BuchiAutomaton b;
    b.alphabet = bigger;
    b.mode = a.mode;
    b.accepting = a.accepting;
    b.initial = a.initial;
    b.out.resize(a.state_count());
    for (const auto& e : a.edges) {
        LetterSet s(bigger.size());
        for (Letter l = 0; l < bigger.size(); ++l)
            if (e.letters.test(proj[l]))
                s.set(l);
        b.add_edge(e.from, std::move(s), e.to, e.marked);
    }
    return b;
}

BuchiAutomaton to_state_based(const BuchiAutomaton& a)
{
    if (a.mode == Acceptance::StateBased)
        return a;
    BuchiAutomaton b;
    b.alphabet = a.alphabet;
    const auto n = static_cast<StateId>(a.state_count());
    for (StateId q = 0; q < n; ++q)
        b.add_state(false);
    for (StateId q = 0; q < n; ++q)
        b.add_state(true);
    for (auto q : a.initial)
        b.initial.push_back(q);
    for (StateId flag = 0; flag < 2; ++flag)
        for (const auto& e : a.edges)
            b.add_edge(e.from + flag * n, e.letters, e.to + (e.marked ? n : 0));
    return trim(b);
}

BuchiAutomaton intersect(const BuchiAutomaton& a0, const BuchiAutomaton& b0)
{
    if (!(a0.alphabet == b0.alphabet))
        throw ModelError("intersect: alphabets differ");
    const auto a = to_state_based(a0);
    const auto b = to_state_based(b0);
    BuchiAutomaton r;
    r.alphabet = a.alphabet;
    std::map<std::tuple<StateId, StateId, int>, StateId> ids;
    std::deque<std::tuple<StateId, StateId, int>> work;
    auto id = [&](StateId p, StateId q, int phase) {
        auto key = std::make_tuple(p, q, phase);
        auto it = ids.find(key);
        if (it != ids.end())
            return it->second;
        auto s = r.add_state(phase == 0 && a.accepting[p]);
        ids.emplace(key, s);
        work.push_back(key);
        return s;
    };
    for (auto p : a.initial)
        for (auto q : b.initial)
            r.initial.push_back(id(p, q, 0));
    while (!work.empty()) {
        auto [p, q, phase] = work.front();
        work.pop_front();
        const auto src = ids.at({p, q, phase});
        int next = phase;
        if (phase == 0 && a.accepting[p])
            next = 1;
        else if (phase == 1 && b.accepting[q])
            next = 0;
        for (auto ea : a.out[p])
            for (auto eb : b.out[q]) {
                auto ls = a.edges[ea].letters & b.edges[eb].letters;
                if (ls.none())
                    continue;
                auto dst = id(a.edges[ea].to, b.edges[eb].to, next);
                r.add_edge(src, std::move(ls), dst);
            }
    }
    return r;
}

namespace
{

std::vector<std::vector<StateId>> predecessors(const BuchiAutomaton& a)
{
    std::vector<std::vector<StateId>> pred(a.state_count());
    for (const auto& e : a.edges)
        pred[e.to].push_back(e.from);
    return pred;
}

// Tarjan SCCs; returns component id per state.
std::vector<int> scc(const BuchiAutomaton& a, int& count)
{
    const auto n = a.state_count();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<StateId> stack;
    std::vector<bool> on(n, false);
    int counter = 0;
    count = 0;
    struct Frame
    {
        StateId q;
        std::size_t i;
    };
    for (StateId root = 0; root < n; ++root) {
        if (index[root] >= 0)
            continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on[root] = true;
        while (!call.empty()) {
            auto& f = call.back();
            if (f.i < a.out[f.q].size()) {
                auto t = a.edges[a.out[f.q][f.i++]].to;
                if (index[t] < 0) {
                    index[t] = low[t] = counter++;
                    stack.push_back(t);
                    on[t] = true;
                    call.push_back({t, 0});
                } else if (on[t]) {
                    low[f.q] = std::min(low[f.q], index[t]);
                }
                continue;
            }
            auto q = f.q;
            call.pop_back();
            if (!call.empty())
                low[call.back().q] = std::min(low[call.back().q], low[q]);
            if (low[q] == index[q]) {
                StateId x;
                do {
                    x = stack.back();
                    stack.pop_back();
                    on[x] = false;
                    comp[x] = count;
                } while (x != q);
                ++count;
            }
        }
    }
    return comp;
}

} // namespace

BuchiAutomaton trim(const BuchiAutomaton& a0)
{
    const auto a = to_state_based(a0);
    const auto n = a.state_count();
    std::vector<bool> reach(n, false);
    std::vector<StateId> work(a.initial.begin(), a.initial.end());
    for (auto q : work)
        reach[q] = true;
    while (!work.empty()) {
        auto q = work.back();
        work.pop_back();
        for (auto e : a.out[q])
            if (!reach[a.edges[e].to]) {
                reach[a.edges[e].to] = true;
                work.push_back(a.edges[e].to);
            }
    }
    int ncomp = 0;
    auto comp = scc(a, ncomp);
    // Accepting states lying on a cycle.
    std::vector<int> comp_size(ncomp, 0);
    for (std::size_t q = 0; q < n; ++q)
        ++comp_size[comp[q]];
    std::vector<bool> good(n, false);
    for (std::size_t q = 0; q < n; ++q) {
        if (!a.accepting[q] || !reach[q])
            continue;
        bool cyc = comp_size[comp[q]] > 1;
        for (auto e : a.out[q])
            if (a.edges[e].to == q)
                cyc = true;
        if (cyc)
            good[q] = true;
    }
    auto pred = predecessors(a);
    std::vector<bool> live(n, false);
    for (std::size_t q = 0; q < n; ++q)
        if (good[q]) {
            live[q] = true;
            work.push_back(static_cast<StateId>(q));
        }
    while (!work.empty()) {
        auto q = work.back();
        work.pop_back();
        for (auto p : pred[q])
            if (!live[p]) {
                live[p] = true;
                work.push_back(p);
            }
    }
    BuchiAutomaton b;
    b.alphabet = a.alphabet;
    std::vector<StateId> map(n, 0);
    for (std::size_t q = 0; q < n; ++q)
        if (live[q] && reach[q])
            map[q] = b.add_state(a.accepting[q]);
    for (auto q : a.initial)
        if (live[q] && reach[q])
            b.initial.push_back(map[q]);
    for (const auto& e : a.edges)
        if (live[e.from] && reach[e.from] && live[e.to] && reach[e.to])
            b.add_edge(map[e.from], e.letters, map[e.to]);
    if (b.state_count() == 0) {
        b.add_state(false);
        b.initial = {0};
    }
    return b;
}

BuchiAutomaton reduce(const BuchiAutomaton& a0)
{
    const auto a = trim(a0);
    const auto n = a.state_count();
    const auto letters = a.alphabet.size();
    if (n > 400)
        return a;
    std::vector<std::vector<std::vector<StateId>>> delta(n, std::vector<std::vector<StateId>>(letters));
    for (const auto& e : a.edges)
        for (auto l : e.letters.letters())
            delta[e.from][l].push_back(e.to);

    // Direct simulation: sim[p][q] iff q can mimic p step by step, accepting when p is.
    std::vector<std::vector<char>> sim(n, std::vector<char>(n, 0));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            sim[p][q] = !a.accepting[p] || a.accepting[q];
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                if (!sim[p][q] || p == q)
                    continue;
                bool ok = true;
                for (Letter l = 0; l < letters && ok; ++l)
                    for (auto pt : delta[p][l]) {
                        bool matched = false;
                        for (auto qt : delta[q][l])
                            if (sim[pt][qt]) {
                                matched = true;
                                break;
                            }
                        if (!matched) {
                            ok = false;
                            break;
                        }
                    }
                if (!ok) {
                    sim[p][q] = 0;
                    changed = true;
                }
            }
    }

    std::vector<int> cls(n, -1);
    int classes = 0;
    for (std::size_t p = 0; p < n; ++p) {
        if (cls[p] >= 0)
            continue;
        cls[p] = classes;
        for (std::size_t q = p + 1; q < n; ++q)
            if (cls[q] < 0 && sim[p][q] && sim[q][p])
                cls[q] = classes;
        ++classes;
    }
    std::vector<std::size_t> rep(classes);
    for (std::size_t p = n; p-- > 0;)
        rep[cls[p]] = p;
    auto strictly_below = [&](StateId x, StateId y) { return sim[x][y] && !sim[y][x]; };

    BuchiAutomaton b;
    b.alphabet = a.alphabet;
    for (int c = 0; c < classes; ++c)
        b.add_state(a.accepting[rep[c]]);
    std::vector<StateId> init;
    for (auto q : a.initial) {
        bool dominated = false;
        for (auto r : a.initial)
            if (strictly_below(q, r))
                dominated = true;
        auto c = static_cast<StateId>(cls[q]);
        if (!dominated && std::find(init.begin(), init.end(), c) == init.end())
            init.push_back(c);
    }
    b.initial = init;
    for (int c = 0; c < classes; ++c) {
        const auto p = rep[c];
        std::map<StateId, LetterSet> targets;
        for (Letter l = 0; l < letters; ++l)
            for (auto t : delta[p][l]) {
                bool dominated = false;
                for (auto u : delta[p][l])
                    if (strictly_below(t, u)) {
                        dominated = true;
                        break;
                    }
                if (dominated)
                    continue;
                auto [it, _] = targets.try_emplace(static_cast<StateId>(cls[t]), LetterSet(letters));
                it->second.set(l);
            }
        for (auto& [t, ls] : targets)
            b.add_edge(static_cast<StateId>(c), std::move(ls), t);
    }
    return trim(b);
}

std::optional<LassoWord> is_empty(const BuchiAutomaton& a0)
{
    const auto a = to_state_based(a0);
    auto succ = [&](StateId q) {
        std::vector<std::pair<Letter, StateId>> r;
        for (auto e : a.out[q])
            r.emplace_back(*a.edges[e].letters.first(), a.edges[e].to);
        return r;
    };
    auto acc = [&](StateId q) { return static_cast<bool>(a.accepting[q]); };
    auto path = nested_dfs<StateId, Letter, std::hash<StateId>>(a.initial, succ, acc);
    if (!path)
        return std::nullopt;
    return LassoWord{path->stem_labels, path->loop_labels};
}

bool accepts(const BuchiAutomaton& a0, const LassoWord& w)
{
    if (w.loop.empty())
        throw ModelError("lasso with empty loop");
    const auto a = to_state_based(a0);
    const auto n = static_cast<StateId>(w.stem.size() + w.loop.size());
    auto at = [&](StateId i) { return i < w.stem.size() ? w.stem[i] : w.loop[i - w.stem.size()]; };
    auto nxt = [&](StateId i) { return i + 1 < n ? i + 1 : static_cast<StateId>(w.stem.size()); };
    using S = std::uint64_t;
    auto succ = [&](S s) {
        const auto q = static_cast<StateId>(s >> 32), i = static_cast<StateId>(s & 0xffffffffU);
        std::vector<std::pair<int, S>> r;
        for (auto t : a.successors(q, at(i)))
            r.emplace_back(0, (S{t} << 32) | nxt(i));
        return r;
    };
    auto acc = [&](S s) { return static_cast<bool>(a.accepting[s >> 32]); };
    std::vector<S> init;
    for (auto q : a.initial)
        init.push_back(S{q} << 32);
    return nested_dfs<S, int, std::hash<S>>(init, succ, acc).has_value();
}

BuchiAutomaton stutter_expand(const Assumption& as, bool state_based)
{
    const Module& m = as.module;
    const auto vars = var_union(m.state_vars, m.input_vars);
    auto alpha = Alphabet::uniform(vars, m.domain);
    std::vector<std::size_t> xpos, ipos;
    for (const auto& v : m.state_vars)
        xpos.push_back(*alpha.index(v));
    for (const auto& v : m.input_vars)
        ipos.push_back(*alpha.index(v));
    const auto codec = m.input_codec();

    // Letters grouped by (state label match, input letter).
    std::vector<LetterSet> by_label(m.state_count(), LetterSet(alpha.size()));
    std::vector<std::vector<Letter>> letters_in(m.state_count());
    std::vector<Letter> input_of(alpha.size());
    std::vector<Value> buf(ipos.size());
    for (Letter l = 0; l < alpha.size(); ++l) {
        auto d = alpha.decode(l);
        for (std::size_t i = 0; i < ipos.size(); ++i)
            buf[i] = d[ipos[i]];
        input_of[l] = codec.encode(buf);
        for (StateId q = 0; q < m.state_count(); ++q) {
            bool ok = true;
            for (std::size_t i = 0; i < xpos.size() && ok; ++i)
                ok = d[xpos[i]] == m.labels[q][i];
            if (ok) {
                by_label[q].set(l);
                letters_in[q].push_back(l);
            }
        }
    }

    BuchiAutomaton b;
    b.alphabet = alpha;
    b.mode = Acceptance::TransitionMarked;
    for (StateId q = 0; q < m.state_count(); ++q)
        b.add_state(false);
    b.initial = {m.initial};
    for (StateId q = 0; q < m.state_count(); ++q) {
        b.add_edge(q, by_label[q], q, false);
        std::map<StateId, LetterSet> adv;
        for (auto l : letters_in[q])
            for (auto t : m.successors(q, input_of[l])) {
                auto [it, _] = adv.try_emplace(t, LetterSet(alpha.size()));
                it->second.set(l);
            }
        for (auto& [t, ls] : adv)
            b.add_edge(q, std::move(ls), t, static_cast<bool>(as.accepting[t]));
    }
    return state_based ? to_state_based(b) : b;
}

} // namespace agv
