#pragma once

#include <functional>

#include "agv/strategy.hpp"

namespace agv::detail
{

/// Negated objective as a Büchi automaton, with the letter each arena state emits.
struct Objective
{
    Alphabet alphabet;
    BuchiAutomaton neg;
    std::vector<Letter> letter;                         // per arena state
    std::vector<std::vector<std::vector<StateId>>> delta;  // [büchi state][letter]
};

Objective compile_objective(const Arena& arena, const FormulaPtr& g, const StateLabels* extra);

/// Per-transition status under a (partial) strategy: 1 allowed, 0 forbidden, -1 undecided.
using MoveStatus = std::function<int(std::size_t)>;

/// Searches the arena restricted to allowed transitions for a word violating the objective.
StrategyCheck check_product(const Arena& arena, const Objective& o, StateId root, const MoveStatus& status);

/// Whether some infinite run from root (accepted by the assumption, if any) uses only allowed moves.
bool has_outcome(const Arena& arena, StateId root, const MoveStatus& status);

} // namespace agv::detail
