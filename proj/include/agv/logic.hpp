#pragma once

// ATL* without next: syntax, parsing, printing and structural queries.

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agv/core.hpp"

namespace agv
{

enum class Op
{
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Until,
    Finally,
    Globally,
    Coop
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula
{
    Op op = Op::True;
    Valuation atom;                      // Op::Atom
    std::vector<std::string> coalition;  // Op::Coop, agent references as written
    FormulaPtr lhs;                      // unary operand or left operand
    FormulaPtr rhs;
};

namespace fml
{
FormulaPtr top();
FormulaPtr bottom();
FormulaPtr atom(Valuation v);
FormulaPtr atom(const std::string& var, Value v);
FormulaPtr neg(FormulaPtr f);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr until(FormulaPtr a, FormulaPtr b);
FormulaPtr finally(FormulaPtr f);
FormulaPtr globally(FormulaPtr f);
FormulaPtr coop(std::vector<std::string> coalition, FormulaPtr f);
/// Conjunction of a list; `top()` when empty.
FormulaPtr conj_all(const std::vector<FormulaPtr>& fs);
} // namespace fml

class FormulaSyntaxError : public std::runtime_error
{
public:
    int line;
    int column;
    FormulaSyntaxError(const std::string& msg, int line_, int column_);
};

FormulaPtr parse_formula(std::string_view text);
std::string to_string(const FormulaPtr& f);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

enum class FormulaClass
{
    LTL,      // no strategic operator
    OneATLs,  // a single outermost strategic operator over an LTL body
    Nested    // anything else
};

FormulaClass classify(const FormulaPtr& f);
const char* class_name(FormulaClass c);

VarList formula_vars(const FormulaPtr& f);
std::size_t formula_size(const FormulaPtr& f);
bool has_coop(const FormulaPtr& f);

/// Rewrites into the core connectives: true, atoms, !, &, U and <<C>>.
FormulaPtr lower(const FormulaPtr& f);

/// Light syntactic simplification preserving semantics (FF=F, GG=G, double negation, constants).
FormulaPtr simplify(const FormulaPtr& f);

/// An atom holds at a position iff the valuation agrees with every assignment of the atom.
bool eval_atom(const Valuation& atom, const Valuation& v);

/// Top-level conjuncts (flattening nested &).
std::vector<FormulaPtr> conjuncts(const FormulaPtr& f);

class RuleShapeError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Decomposition of <<C>>(phi_1 & ... & phi_m) into one local objective per part.
struct RuleShape
{
    std::vector<std::size_t> coalition;       // 0-based agents, sorted
    std::vector<FormulaPtr> part_objectives;  // aligned with the parts
};

/// All ways to split the body of `f` among `parts` so that every conjunct only
/// mentions variables visible to its part. Splits leaving fewer parts with a trivial
/// objective come first; ties are ordered lexicographically by part index.
/// Throws RuleShapeError when the formula does not have the required shape.
std::vector<RuleShape> rule_shape_candidates(const FormulaPtr& f, const System& sys,
                                             const std::vector<std::vector<std::size_t>>& parts,
                                             const std::vector<VarList>& visible);

/// First candidate of rule_shape_candidates.
RuleShape check_rule_shape(const FormulaPtr& f, const System& sys,
                           const std::vector<std::vector<std::size_t>>& parts,
                           const std::vector<VarList>& visible);

/// Coalition of a strategic formula resolved against the system (0-based, sorted).
std::vector<std::size_t> resolve_coalition(const Formula& coop, const System& sys);

} // namespace agv
