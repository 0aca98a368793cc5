#pragma once

// Modules, valuations and the asynchronous composition algebra.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace agv
{

using Value = int;
using StateId = std::uint32_t;
using Letter = std::uint32_t;
using VarList = std::vector<std::string>;  // always sorted, duplicate-free

/// Raised for malformed models, incompatible operands and similar user errors.
class ModelError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

VarList make_var_list(std::vector<std::string> vars);
VarList var_union(const VarList& a, const VarList& b);
VarList var_intersection(const VarList& a, const VarList& b);
VarList var_difference(const VarList& a, const VarList& b);
bool var_subset(const VarList& a, const VarList& b);
bool var_contains(const VarList& vars, const std::string& v);
std::optional<std::size_t> var_index(const VarList& vars, const std::string& v);

/// Finite partial assignment of values to variables.
class Valuation
{
    std::map<std::string, Value> values_;

public:
    Valuation() = default;
    Valuation(std::initializer_list<std::pair<const std::string, Value>> init) : values_(init) {}
    Valuation(const VarList& vars, std::span<const Value> values);

    [[nodiscard]] bool defines(const std::string& var) const { return values_.contains(var); }
    [[nodiscard]] Value at(const std::string& var) const;
    void set(const std::string& var, Value v) { values_[var] = v; }
    [[nodiscard]] VarList scope() const;
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] bool empty() const { return values_.empty(); }
    [[nodiscard]] const std::map<std::string, Value>& entries() const { return values_; }

    [[nodiscard]] Valuation restricted_to(const VarList& vars) const;
    /// Values for `vars` in order; every variable must be defined.
    [[nodiscard]] std::vector<Value> values_for(const VarList& vars) const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Valuation&, const Valuation&) = default;
    friend auto operator<=>(const Valuation& a, const Valuation& b) { return a.values_ <=> b.values_; }
};

/// True iff the two valuations agree on every commonly assigned variable.
bool compatible(const Valuation& a, const Valuation& b);

/// Union of two compatible valuations; throws ModelError("incompatible valuations") otherwise.
Valuation unite(const Valuation& a, const Valuation& b);

/// Mixed-radix encoding of full valuations over a variable list. The first
/// variable is the least significant digit.
class LetterCodec
{
    std::size_t vars_ = 0;
    int domain_ = 1;
    Letter count_ = 1;

public:
    LetterCodec() = default;
    LetterCodec(std::size_t vars, int domain);

    [[nodiscard]] Letter count() const { return count_; }
    [[nodiscard]] Letter encode(std::span<const Value> values) const;
    [[nodiscard]] std::vector<Value> decode(Letter letter) const;
    [[nodiscard]] Value digit(Letter letter, std::size_t var) const;
};

struct Transition
{
    StateId from = 0;
    Letter input = 0;
    StateId to = 0;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Module (X, I, Q, T, lambda, q0). Input letters are full valuations over
/// `input_vars` encoded with `input_codec()`. Transitions are kept sorted and
/// deduplicated; `finalize()` re-establishes that after direct edits.
struct Module
{
    int domain = 2;                            // values are 0 .. domain-1
    VarList state_vars;
    VarList input_vars;
    std::vector<std::string> state_names;
    std::vector<std::vector<Value>> labels;    // aligned with state_vars
    std::vector<Transition> transitions;
    StateId initial = 0;
    // For composites: per state, the tuple of component-local states.
    std::vector<std::vector<StateId>> parts;

    [[nodiscard]] std::size_t state_count() const { return state_names.size(); }
    [[nodiscard]] LetterCodec input_codec() const { return {input_vars.size(), domain}; }
    [[nodiscard]] Valuation label(StateId q) const { return {state_vars, labels.at(q)}; }
    [[nodiscard]] Valuation input_valuation(Letter a) const;
    [[nodiscard]] std::size_t arity() const { return parts.empty() ? 1 : parts.front().size(); }

    /// Transitions leaving `q`, in (input, target) order.
    [[nodiscard]] std::span<const Transition> outgoing(StateId q) const;
    [[nodiscard]] std::vector<StateId> successors(StateId q, Letter input) const;
    [[nodiscard]] std::optional<std::size_t> find_transition(const Transition& t) const;
    [[nodiscard]] std::optional<StateId> find_state(const std::string& name) const;

    void finalize();

private:
    std::vector<std::size_t> offsets_;
};

/// Repertoire: per state, a non-empty list of non-empty transition sets.
struct Repertoire
{
    std::vector<std::vector<std::vector<Transition>>> choices;

    /// One singleton choice per outgoing transition.
    static Repertoire singletons(const Module& m);
};

struct Agent
{
    std::string name;
    Module module;
    Repertoire repertoire;
};

/// Extended module (module plus Büchi accepting states).
struct Assumption
{
    std::string name;
    Module module;
    std::vector<bool> accepting;
};

struct System
{
    int domain = 2;
    std::vector<Agent> agents;

    [[nodiscard]] std::size_t size() const { return agents.size(); }
    /// Resolves an agent reference: a name or a 1-based index. Returns 0-based.
    [[nodiscard]] std::size_t resolve_agent(const std::string& ref) const;
};

struct Violation
{
    std::string clause;   // "a", "b", "disjoint", "label", "repertoire"
    std::string message;
};

std::vector<Violation> validate_module(const Module& m);
std::vector<Violation> validate_repertoire(const Module& m, const Repertoire& r);
std::vector<Violation> validate_system(const System& sys);

/// Adds the self-loop (q, a, q) for every pair without an outgoing transition.
Module complete_inputs(Module m);

/// Drops the component-tuple bookkeeping: the module becomes a leaf.
Module atomize(Module m);

/// The unit module: one state, no variables.
Module unit_module(int domain);

Module compose_pair(const Module& m1, const Module& m2);

/// Left fold of compose_pair; intermediate results are cut down to their
/// reachable part, which preserves every trace from the initial state.
Module compose_all(std::span<const Module> modules);

struct ReachableInfo
{
    std::size_t states = 0;
    std::size_t transitions = 0;
    Module module;
};

ReachableInfo reachable(const Module& m);

/// The same module with a different initial state.
Module reroot(Module m, StateId q);

/// Input guard: allowed values per input variable; unmentioned inputs are free.
using Guard = std::map<std::string, std::vector<Value>>;

/// Incremental construction of a module from named states and guarded moves.
class ModuleBuilder
{
    Module m_;
    bool has_initial_ = false;

public:
    ModuleBuilder(int domain, std::vector<std::string> state_vars, std::vector<std::string> input_vars);

    StateId add_state(const std::string& name, const Valuation& label);
    void set_initial(StateId q);
    /// Adds (from, a, to) for every input letter a satisfying the guard.
    void add_transition(StateId from, StateId to, const Guard& guard = {});
    /// Letters over the inputs satisfying the guard.
    [[nodiscard]] std::vector<Letter> letters(const Guard& guard) const;
    [[nodiscard]] const Module& peek() const { return m_; }

    /// Finalizes; `complete` adds the omitted self-loops.
    Module build(bool complete = true);
};

/// Deterministic relabeling check used by tests: true iff there is a
/// bijection between states preserving labels, transitions and the initial state.
bool isomorphic(const Module& a, const Module& b);

} // namespace agv
