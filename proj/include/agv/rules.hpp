#pragma once

// Assume-guarantee rules R_k and Part^P_k.

#include <optional>
#include <string>
#include <vector>

#include "agv/core.hpp"
#include "agv/guarantee.hpp"
#include "agv/logic.hpp"
#include "agv/strategy.hpp"

namespace agv
{

using AgentSet = std::vector<std::size_t>;  // 0-based, sorted

/// Disjoint non-empty parts covering a coalition.
struct Partition
{
    std::vector<AgentSet> parts;

    static Partition singletons(const AgentSet& coalition);
    [[nodiscard]] AgentSet coalition() const;
    /// Empty when valid, otherwise the reason.
    [[nodiscard]] std::string check(std::size_t agents) const;
};

/// Direct neighbors of the seed: agents reading a seed variable or written to by one.
AgentSet neighborhood(const System& sys, const AgentSet& seed, int k);

/// Composition of the listed agents in index order; unit module for an empty set.
Module comp_module(const System& sys, const AgentSet& indices);

/// Composition of the agents outside C with every state accepting.
Assumption trivial_assumption(const System& sys, const AgentSet& coalition);

enum class AgvVerdict
{
    Derived,
    PremiseFailed,
    Error
};

const char* agv_verdict_name(AgvVerdict v);

struct PartReport
{
    AgentSet agents;
    FormulaPtr objective;
    std::string assumption;
    int k = 1;
    AgentSet neighbors;

    bool strategy_ok = false;
    VerificationResult strategy;          // premise 1
    std::size_t strategy_states = 0;

    bool guarantee_checked = false;
    bool guarantee_ok = false;
    GuaranteeResult guarantee;            // premise 2
    std::size_t guarantee_states = 0;     // states of the neighborhood composition
    double guarantee_seconds = 0;

    std::string error;
};

struct AgvReport
{
    AgvVerdict verdict = AgvVerdict::Error;
    std::vector<PartReport> parts;
    std::string message;

    [[nodiscard]] std::size_t max_premise_states() const;
};

struct RuleOptions
{
    int k = 1;
    bool auto_k = false;             // raise k until premise 2 holds or k = n
    bool exclude_coalition = false;  // drop coalition members from neighborhoods
    bool stop_at_first_failure = false;
    SynthesisOptions synthesis;
    GuaranteeOptions guarantee;
};

/// Part^P_k: objectives and assumptions are aligned with the parts.
AgvReport apply_rule_part(const System& sys, const Partition& p, const std::vector<FormulaPtr>& objectives,
                          const std::vector<Assumption>& assumptions, const RuleOptions& opts = {});

/// R_k: one objective and assumption per coalition member (in coalition order).
AgvReport apply_rule_rk(const System& sys, const AgentSet& coalition, const std::vector<FormulaPtr>& objectives,
                        const std::vector<Assumption>& assumptions, const RuleOptions& opts = {});

/// The conclusion <<C>>(psi_1 & ... & psi_m) the rule speaks about.
FormulaPtr rule_conclusion(const System& sys, const Partition& p, const std::vector<FormulaPtr>& objectives);

} // namespace agv
