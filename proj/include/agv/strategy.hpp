#pragma once

// Memoryless imperfect-information strategies: restriction, checking, synthesis.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agv/core.hpp"
#include "agv/logic.hpp"
#include "agv/omega.hpp"

namespace agv
{

/// Chosen repertoire entry (index into R(q)) for every local state of one agent.
struct IrStrategy
{
    std::vector<std::size_t> choice;

    friend bool operator==(const IrStrategy&, const IrStrategy&) = default;
};

struct JointStrategy
{
    std::vector<std::size_t> coalition;  // 0-based agent indices, sorted
    std::vector<IrStrategy> strategies;  // aligned with coalition

    friend bool operator==(const JointStrategy&, const JointStrategy&) = default;
};

/// Total number of joint strategies (as a floating-point count; may be huge).
double count_joint_strategies(const System& sys, const std::vector<std::size_t>& coalition);

/// Produces every joint strategy once, odometer-style: the first agent's first
/// state is the most significant position, repertoire order within a position.
class StrategyEnumerator
{
public:
    StrategyEnumerator(const System& sys, std::vector<std::size_t> coalition);
    /// Next strategy, or false when exhausted.
    bool next(JointStrategy& out);

private:
    std::vector<std::size_t> coalition_;
    std::vector<std::vector<std::size_t>> radix_;  // [member][state]
    JointStrategy current_;
    bool started_ = false;
    bool done_ = false;
};

std::vector<JointStrategy> enumerate_joint_strategies(const System& sys, const std::vector<std::size_t>& coalition,
                                                      std::size_t limit = 0);

/// The composed system (optionally with an assumption as last component), with the
/// per-transition local moves precomputed.
struct Arena
{
    System system;
    std::optional<Assumption> assumption;
    Module module;                                    // reachable composition
    std::vector<bool> accepting;                      // lifted assumption acceptance; empty without one
    std::vector<std::vector<std::int32_t>> local_move;  // [transition][agent] local transition index or -1

    [[nodiscard]] std::size_t agent_count() const { return system.agents.size(); }
    [[nodiscard]] StateId local_state(StateId q, std::size_t agent) const { return module.parts[q][agent]; }
};

Arena make_arena(const System& sys, const Assumption* assumption = nullptr);

/// Whether transition t of the arena is compatible with the strategy.
bool implements(const Arena& arena, std::size_t t, const JointStrategy& s);

/// Arena module minus the transitions that move a coalition member outside its chosen set.
Module restrict_by_strategy(const Arena& arena, const JointStrategy& s);

struct StrategyCheck
{
    bool holds = true;
    std::optional<LassoWord> counterexample;  // over the arena's state variables
    std::vector<StateId> cex_stem;            // arena states
    std::vector<StateId> cex_loop;
};

/// Extra propositions attached to arena states (used for nested formulas).
struct StateLabels
{
    std::vector<std::string> names;
    std::vector<std::vector<bool>> values;  // [proposition][state]
};

/// Every infinite word from `root` implementing `s` (and accepted by the assumption,
/// if one is attached) satisfies g.
StrategyCheck holds_under_strategy(const Arena& arena, const JointStrategy& s, const FormulaPtr& g,
                                   std::optional<StateId> root = std::nullopt, const StateLabels* extra = nullptr);

enum class Verdict
{
    True,
    False,
    Inconclusive
};

const char* verdict_name(Verdict v);

struct Stats
{
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t strategies = 0;  // candidate strategies evaluated
    double seconds = 0;
};

struct VerificationResult
{
    Verdict verdict = Verdict::Inconclusive;
    std::optional<JointStrategy> witness;
    bool vacuous = false;  // the witness blocks every infinite outcome
    std::optional<LassoWord> counterexample;
    Alphabet cex_alphabet;
    std::string message;
    Stats stats;
};

struct SynthesisOptions
{
    bool lazy = true;              // branch only on reachable undefined local states
    std::size_t max_strategies = 0;  // 0 = unbounded; exceeding it gives Inconclusive
};

/// Searches for a joint strategy of `coalition` enforcing g from `root`.
VerificationResult synthesize(const Arena& arena, const std::vector<std::size_t>& coalition, const FormulaPtr& g,
                              const SynthesisOptions& opts = {}, std::optional<StateId> root = std::nullopt,
                              const StateLabels* extra = nullptr);

enum class Semantics
{
    ir,
    iR
};

/// Model checking of LTL, single-modality and nested formulas.
VerificationResult verify(const System& sys, const FormulaPtr& f, Semantics sem = Semantics::ir,
                          const SynthesisOptions& opts = {});

/// Same, with an assumption attached (extended semantics).
VerificationResult verify(const Arena& arena, const FormulaPtr& f, Semantics sem = Semantics::ir,
                          const SynthesisOptions& opts = {});

std::string to_string(const JointStrategy& s, const System& sys);

} // namespace agv
