#pragma once

// Curtailment and the guarantee relation between a module and an assumption.

#include <optional>
#include <string>
#include <vector>

#include "agv/core.hpp"
#include "agv/omega.hpp"

namespace agv
{

using WordPrefix = std::vector<Valuation>;

struct CurtailResult
{
    std::optional<WordPrefix> word;   // set on success
    std::size_t violating_block = 0;  // meaningful when word is empty
    std::string reason;
};

/// Contracts the blocks [c_i, c_{i+1}) of w to their representatives over Y.
/// Rejects when a block is not constant on Y or the indices are malformed.
CurtailResult curtail_prefix(const WordPrefix& w, const VarList& y, const std::vector<std::size_t>& c);

struct GuaranteeOptions
{
    std::size_t state_limit = 4000000;  // product states before giving up
};

struct GuaranteeResult
{
    bool holds = true;
    // Trace of m with no accepted curtailment (states of m).
    std::vector<StateId> cex_stem;
    std::vector<StateId> cex_loop;
    std::optional<LassoWord> word;  // same trace over X_A and I_A
    Alphabet alphabet;
    std::size_t product_states = 0;
};

/// M |= A: every trace of m has a curtailment accepted by a.
/// Throws AutomatonTooLarge when complementation or the search exceeds its budget,
/// ModelError when m does not provide the assumption's variables.
GuaranteeResult guarantees(const Module& m, const Assumption& a, const GuaranteeOptions& opts = {});

/// State names along a lasso, e.g. "r g1 (r g2)^w".
std::string describe_trace(const Module& m, const std::vector<StateId>& stem, const std::vector<StateId>& loop);

} // namespace agv
