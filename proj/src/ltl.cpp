// Tableau translation of LTL into generalized Büchi automata.

#include <map>
#include <set>
#include <tuple>

#include "agv/omega.hpp"

namespace agv
{

namespace
{

enum class K
{
    TT,
    FF,
    Lit,
    NLit,
    And,
    Or,
    U,
    R
};

struct Node
{
    K k;
    int atom = -1;
    int l = -1, r = -1;
};

class Table
{
public:
    std::vector<Node> nodes;
    std::vector<Valuation> atoms;

    int make(K k, int atom = -1, int l = -1, int r = -1)
    {
        auto key = std::make_tuple(static_cast<int>(k), atom, l, r);
        auto it = ids_.find(key);
        if (it != ids_.end())
            return it->second;
        nodes.push_back({k, atom, l, r});
        int id = static_cast<int>(nodes.size() - 1);
        ids_.emplace(key, id);
        return id;
    }

    int atom_id(const Valuation& v)
    {
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i] == v)
                return static_cast<int>(i);
        atoms.push_back(v);
        return static_cast<int>(atoms.size() - 1);
    }

    int nnf(const FormulaPtr& f, bool pos)
    {
        switch (f->op) {
        case Op::True: return make(pos ? K::TT : K::FF);
        case Op::False: return make(pos ? K::FF : K::TT);
        case Op::Atom: return make(pos ? K::Lit : K::NLit, atom_id(f->atom));
        case Op::Not: return nnf(f->lhs, !pos);
        case Op::And: return make(pos ? K::And : K::Or, -1, nnf(f->lhs, pos), nnf(f->rhs, pos));
        case Op::Or: return make(pos ? K::Or : K::And, -1, nnf(f->lhs, pos), nnf(f->rhs, pos));
        case Op::Implies: return make(pos ? K::Or : K::And, -1, nnf(f->lhs, !pos), nnf(f->rhs, pos));
        case Op::Until: return make(pos ? K::U : K::R, -1, nnf(f->lhs, pos), nnf(f->rhs, pos));
        case Op::Finally:
            return pos ? make(K::U, -1, make(K::TT), nnf(f->lhs, true))
                       : make(K::R, -1, make(K::FF), nnf(f->lhs, false));
        case Op::Globally:
            return pos ? make(K::R, -1, make(K::FF), nnf(f->lhs, true))
                       : make(K::U, -1, make(K::TT), nnf(f->lhs, false));
        case Op::Coop: throw ModelError("ltl_to_buchi: strategic operator in an LTL objective");
        }
        return make(K::TT);
    }

private:
    std::map<std::tuple<int, int, int, int>, int> ids_;
};

struct TNode
{
    std::set<int> incoming;  // -1 is the initial marker
    std::set<int> fresh, old, next;
};

struct Tableau
{
    Table& t;
    std::vector<TNode> done;

    bool contradicts(const std::set<int>& old, int f) const
    {
        const auto& n = t.nodes[f];
        if (n.k == K::FF)
            return true;
        if (n.k == K::Lit || n.k == K::NLit) {
            for (int g : old) {
                const auto& m = t.nodes[g];
                if (m.atom == n.atom && ((n.k == K::Lit && m.k == K::NLit) || (n.k == K::NLit && m.k == K::Lit)))
                    return true;
            }
        }
        return false;
    }

    void expand(TNode node)
    {
        while (!node.fresh.empty()) {
            int f = *node.fresh.begin();
            node.fresh.erase(node.fresh.begin());
            if (node.old.contains(f))
                continue;
            const Node n = t.nodes[f];
            auto add = [&](TNode& x, int g) {
                if (!x.old.contains(g))
                    x.fresh.insert(g);
            };
            switch (n.k) {
            case K::TT:
            case K::FF:
            case K::Lit:
            case K::NLit:
                if (contradicts(node.old, f))
                    return;
                node.old.insert(f);
                break;
            case K::And:
                node.old.insert(f);
                add(node, n.l);
                add(node, n.r);
                break;
            case K::Or:
            case K::U:
            case K::R: {
                TNode a = node, b = node;
                a.old.insert(f);
                b.old.insert(f);
                if (n.k == K::Or) {
                    add(a, n.l);
                    add(b, n.r);
                } else if (n.k == K::U) {
                    add(a, n.l);
                    a.next.insert(f);
                    add(b, n.r);
                } else {
                    add(a, n.r);
                    a.next.insert(f);
                    add(b, n.l);
                    add(b, n.r);
                }
                expand(std::move(a));
                expand(std::move(b));
                return;
            }
            }
        }
        for (auto& d : done)
            if (d.old == node.old && d.next == node.next) {
                d.incoming.insert(node.incoming.begin(), node.incoming.end());
                return;
            }
        done.push_back(node);
        const int id = static_cast<int>(done.size() - 1);
        TNode succ;
        succ.incoming = {id};
        succ.fresh = node.next;
        expand(std::move(succ));
    }
};

} // namespace

BuchiAutomaton ltl_to_buchi(const FormulaPtr& g0, const Alphabet& alphabet)
{
    if (has_coop(g0))
        throw ModelError("ltl_to_buchi: expected an LTL formula");
    const auto g = simplify(g0);
    if (g->op == Op::True)
        return universal_automaton(alphabet);
    Table t;
    const int root = t.nnf(g, true);
    std::vector<LetterSet> atom_set;
    for (const auto& a : t.atoms)
        atom_set.push_back(atom_letters(a, alphabet));

    Tableau tab{t, {}};
    TNode init;
    init.incoming = {-1};
    init.fresh = {root};
    tab.expand(std::move(init));

    std::vector<int> untils;
    for (std::size_t i = 0; i < t.nodes.size(); ++i)
        if (t.nodes[i].k == K::U)
            untils.push_back(static_cast<int>(i));
    const auto k = untils.size();
    const auto& nodes = tab.done;
    const auto nn = nodes.size();

    std::vector<LetterSet> guard(nn, LetterSet(alphabet.size(), true));
    std::vector<std::vector<bool>> in_f(nn, std::vector<bool>(std::max<std::size_t>(k, 1), true));
    for (std::size_t i = 0; i < nn; ++i) {
        for (int f : nodes[i].old) {
            if (t.nodes[f].k == K::Lit)
                guard[i] &= atom_set[t.nodes[f].atom];
            else if (t.nodes[f].k == K::NLit)
                guard[i] &= atom_set[t.nodes[f].atom].complement();
        }
        for (std::size_t j = 0; j < k; ++j)
            in_f[i][j] = !nodes[i].old.contains(untils[j]) || nodes[i].old.contains(t.nodes[untils[j]].r);
    }

    // Degeneralize: level c < k waits for acceptance set c, level k marks a completed round.
    // Levels advance greedily past every set the node belongs to.
    const std::size_t levels = k + 1;
    BuchiAutomaton a;
    a.alphabet = alphabet;
    const auto entry = a.add_state(false);
    a.initial = {entry};
    for (std::size_t i = 0; i < nn; ++i)
        for (std::size_t c = 0; c < levels; ++c)
            a.add_state(c == k);
    auto sid = [&](std::size_t i, std::size_t c) { return static_cast<StateId>(1 + i * levels + c); };
    auto advance = [&](std::size_t i, std::size_t c) {
        std::size_t c2 = c == k ? 0 : c;
        while (c2 < k && in_f[i][c2])
            ++c2;
        return c2;
    };
    for (std::size_t j = 0; j < nn; ++j) {
        if (guard[j].none())
            continue;
        for (int src : nodes[j].incoming) {
            if (src < 0) {
                a.add_edge(entry, guard[j], sid(j, 0));
                continue;
            }
            const auto i = static_cast<std::size_t>(src);
            for (std::size_t c = 0; c < levels; ++c)
                a.add_edge(sid(i, c), guard[j], sid(j, advance(i, c)));
        }
    }
    return reduce(a);
}

} // namespace agv
