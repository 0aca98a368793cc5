#pragma once

// Büchi automata over explicit finite alphabets.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "agv/core.hpp"
#include "agv/logic.hpp"

namespace agv
{

/// Letters are full valuations over `vars`, encoded mixed-radix with the first
/// variable least significant.
struct Alphabet
{
    std::vector<std::string> vars;
    std::vector<int> sizes;

    static Alphabet uniform(const VarList& vars, int domain);

    [[nodiscard]] Letter size() const;
    [[nodiscard]] Letter encode(std::span<const Value> values) const;
    [[nodiscard]] std::vector<Value> decode(Letter l) const;
    [[nodiscard]] Value digit(Letter l, std::size_t var) const;
    [[nodiscard]] std::optional<std::size_t> index(const std::string& var) const;
    [[nodiscard]] Valuation valuation(Letter l) const;
    /// Letter of a valuation defining (at least) every variable of the alphabet.
    [[nodiscard]] Letter letter_of(const Valuation& v) const;

    friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

/// Fixed-size bitset over the letters of an alphabet.
class LetterSet
{
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;

public:
    LetterSet() = default;
    explicit LetterSet(std::size_t n, bool full = false);
    static LetterSet single(std::size_t n, Letter l);

    [[nodiscard]] std::size_t universe() const { return n_; }
    [[nodiscard]] bool test(Letter l) const { return (w_[l >> 6] >> (l & 63)) & 1U; }
    void set(Letter l) { w_[l >> 6] |= std::uint64_t{1} << (l & 63); }
    [[nodiscard]] bool any() const;
    [[nodiscard]] bool none() const { return !any(); }
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] std::optional<Letter> first() const;
    [[nodiscard]] std::vector<Letter> letters() const;
    [[nodiscard]] LetterSet complement() const;
    LetterSet& operator&=(const LetterSet& o);
    LetterSet& operator|=(const LetterSet& o);
    friend LetterSet operator&(LetterSet a, const LetterSet& b) { return a &= b; }
    friend LetterSet operator|(LetterSet a, const LetterSet& b) { return a |= b; }
    friend bool operator==(const LetterSet&, const LetterSet&) = default;
};

enum class Acceptance
{
    StateBased,
    TransitionMarked
};

struct BuchiEdge
{
    StateId from = 0;
    LetterSet letters;
    StateId to = 0;
    bool marked = false;  // only meaningful in transition-marked mode
};

struct BuchiAutomaton
{
    Alphabet alphabet;
    Acceptance mode = Acceptance::StateBased;
    std::vector<bool> accepting;   // state-based mode
    std::vector<StateId> initial;
    std::vector<BuchiEdge> edges;
    std::vector<std::vector<std::size_t>> out;  // edge indices per source state

    [[nodiscard]] std::size_t state_count() const { return accepting.size(); }
    StateId add_state(bool acc = false);
    void add_edge(StateId from, LetterSet letters, StateId to, bool marked = false);
    /// Targets reachable from q by letter l.
    [[nodiscard]] std::vector<StateId> successors(StateId q, Letter l) const;
};

struct LassoWord
{
    std::vector<Letter> stem;
    std::vector<Letter> loop;  // non-empty

    friend bool operator==(const LassoWord&, const LassoWord&) = default;
};

std::string to_string(const LassoWord& w, const Alphabet& a);

class AutomatonTooLarge : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Letters of `alphabet` satisfying an atom.
LetterSet atom_letters(const Valuation& atom, const Alphabet& alphabet);

/// Büchi automaton for an LTL formula (tableau construction, then degeneralization).
BuchiAutomaton ltl_to_buchi(const FormulaPtr& g, const Alphabet& alphabet);

BuchiAutomaton universal_automaton(const Alphabet& alphabet);

/// Same language over a larger alphabet, ignoring the added variables.
BuchiAutomaton extend_alphabet(const BuchiAutomaton& a, const Alphabet& bigger);

/// State-based automaton with the same language as a transition-marked one.
BuchiAutomaton to_state_based(const BuchiAutomaton& a);

BuchiAutomaton intersect(const BuchiAutomaton& a, const BuchiAutomaton& b);

/// Keeps states reachable from an initial state and able to reach an accepting cycle.
BuchiAutomaton trim(const BuchiAutomaton& a);

/// Quotient by the coarsest bisimulation respecting acceptance; language-preserving.
BuchiAutomaton reduce(const BuchiAutomaton& a);

/// Accepted lasso, or nullopt when the language is empty.
std::optional<LassoWord> is_empty(const BuchiAutomaton& a);

bool accepts(const BuchiAutomaton& a, const LassoWord& w);

/// On-the-fly rank-based complement of a state-based automaton.
class ComplementGraph
{
public:
    using Key = std::string;

    explicit ComplementGraph(const BuchiAutomaton& a);

    [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
    [[nodiscard]] Key initial() const;
    [[nodiscard]] std::vector<Key> successors(const Key& k, Letter l) const;
    [[nodiscard]] bool accepting(const Key& k) const;
    [[nodiscard]] std::string describe(const Key& k) const;

private:
    Alphabet alphabet_;
    std::size_t n_ = 0;
    std::vector<bool> final_;
    std::vector<StateId> init_;
    std::vector<std::vector<std::vector<StateId>>> delta_;  // [state][letter]
};

/// Materialized complement; throws AutomatonTooLarge beyond `cap` states.
BuchiAutomaton complement(const BuchiAutomaton& a, std::size_t cap = 100000);

/// Automaton over X_A and I_A accepting the words whose curtailment on X_A,
/// read together with the inputs, is accepted by the assumption.
BuchiAutomaton stutter_expand(const Assumption& a, bool state_based = true);

} // namespace agv
