#include <algorithm>
#include <set>
#include <tuple>

#include "agv/logic.hpp"

namespace agv
{

namespace
{

void collect_vars(const FormulaPtr& f, std::set<std::string>& out)
{
    if (!f)
        return;
    if (f->op == Op::Atom)
        for (const auto& [k, v] : f->atom.entries())
            out.insert(k);
    collect_vars(f->lhs, out);
    collect_vars(f->rhs, out);
}

bool is(const FormulaPtr& f, Op op) { return f && f->op == op; }

} // namespace

bool has_coop(const FormulaPtr& f)
{
    if (!f)
        return false;
    return f->op == Op::Coop || has_coop(f->lhs) || has_coop(f->rhs);
}

FormulaClass classify(const FormulaPtr& f)
{
    if (!has_coop(f))
        return FormulaClass::LTL;
    if (f->op == Op::Coop && !has_coop(f->lhs))
        return FormulaClass::OneATLs;
    return FormulaClass::Nested;
}

const char* class_name(FormulaClass c)
{
    switch (c) {
    case FormulaClass::LTL: return "LTL";
    case FormulaClass::OneATLs: return "OneATLs";
    default: return "Nested";
    }
}

VarList formula_vars(const FormulaPtr& f)
{
    std::set<std::string> s;
    collect_vars(f, s);
    return VarList(s.begin(), s.end());
}

std::size_t formula_size(const FormulaPtr& f)
{
    if (!f)
        return 0;
    return 1 + formula_size(f->lhs) + formula_size(f->rhs);
}

FormulaPtr lower(const FormulaPtr& f)
{
    using namespace fml;
    switch (f->op) {
    case Op::True:
    case Op::Atom: return f;
    case Op::False: return neg(top());
    case Op::Not: return neg(lower(f->lhs));
    case Op::And: return conj(lower(f->lhs), lower(f->rhs));
    case Op::Or: return neg(conj(neg(lower(f->lhs)), neg(lower(f->rhs))));
    case Op::Implies: return neg(conj(lower(f->lhs), neg(lower(f->rhs))));
    case Op::Until: return until(lower(f->lhs), lower(f->rhs));
    case Op::Finally: return until(top(), lower(f->lhs));
    case Op::Globally: return neg(until(top(), neg(lower(f->lhs))));
    case Op::Coop: return coop(f->coalition, lower(f->lhs));
    }
    return f;
}

FormulaPtr simplify(const FormulaPtr& f)
{
    using namespace fml;
    if (!f || f->op == Op::True || f->op == Op::False)
        return f;
    if (f->op == Op::Atom)
        return f->atom.empty() ? top() : f;
    auto l = f->lhs ? simplify(f->lhs) : nullptr;
    auto r = f->rhs ? simplify(f->rhs) : nullptr;
    switch (f->op) {
    case Op::Not:
        if (is(l, Op::Not))
            return l->lhs;
        if (is(l, Op::True))
            return bottom();
        if (is(l, Op::False))
            return top();
        return neg(l);
    case Op::And:
        if (is(l, Op::False) || is(r, Op::False))
            return bottom();
        if (is(l, Op::True))
            return r;
        if (is(r, Op::True))
            return l;
        if (equal(l, r))
            return l;
        return conj(l, r);
    case Op::Or:
        if (is(l, Op::True) || is(r, Op::True))
            return top();
        if (is(l, Op::False))
            return r;
        if (is(r, Op::False))
            return l;
        if (equal(l, r))
            return l;
        return disj(l, r);
    case Op::Implies:
        if (is(l, Op::False) || is(r, Op::True))
            return top();
        if (is(l, Op::True))
            return r;
        return implies(l, r);
    case Op::Until:
        if (is(r, Op::True) || is(r, Op::False))
            return r;
        if (is(l, Op::False))
            return r;
        if (is(l, Op::True))
            return simplify(finally(r));
        return until(l, r);
    case Op::Finally:
        if (is(l, Op::True) || is(l, Op::False) || is(l, Op::Finally))
            return l;
        if (is(l, Op::Globally) && is(l->lhs, Op::Finally))  // F G F a = G F a
            return l;
        return finally(l);
    case Op::Globally:
        if (is(l, Op::True) || is(l, Op::False) || is(l, Op::Globally))
            return l;
        if (is(l, Op::Finally) && is(l->lhs, Op::Globally))  // G F G a = F G a
            return l;
        return globally(l);
    case Op::Coop: return coop(f->coalition, l);
    default: return f;
    }
}

bool eval_atom(const Valuation& atom, const Valuation& v)
{
    for (const auto& [k, val] : atom.entries()) {
        if (!v.defines(k))
            throw ModelError("atom mentions '" + k + "', which the valuation does not assign");
        if (v.at(k) != val)
            return false;
    }
    return true;
}

std::vector<FormulaPtr> conjuncts(const FormulaPtr& f)
{
    if (f->op != Op::And)
        return {f};
    auto l = conjuncts(f->lhs);
    auto r = conjuncts(f->rhs);
    l.insert(l.end(), r.begin(), r.end());
    return l;
}

std::vector<std::size_t> resolve_coalition(const Formula& coop, const System& sys)
{
    std::vector<std::size_t> c;
    for (const auto& id : coop.coalition)
        c.push_back(sys.resolve_agent(id));
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

std::vector<RuleShape> rule_shape_candidates(const FormulaPtr& f, const System& sys,
                                             const std::vector<std::vector<std::size_t>>& parts,
                                             const std::vector<VarList>& visible)
{
    if (classify(f) != FormulaClass::OneATLs)
        throw RuleShapeError("expected a single strategic operator over an LTL objective");
    if (visible.size() != parts.size() || parts.empty())
        throw RuleShapeError("need one visibility set per part");
    auto coalition = resolve_coalition(*f, sys);
    std::vector<std::size_t> covered;
    for (const auto& p : parts)
        covered.insert(covered.end(), p.begin(), p.end());
    std::sort(covered.begin(), covered.end());
    if (covered != coalition)
        throw RuleShapeError("the parts do not cover exactly the coalition");

    const auto cs = conjuncts(f->lhs);
    std::vector<std::vector<std::size_t>> options(cs.size());
    for (std::size_t j = 0; j < cs.size(); ++j) {
        const auto vars = formula_vars(cs[j]);
        for (std::size_t p = 0; p < parts.size(); ++p)
            if (var_subset(vars, visible[p]))
                options[j].push_back(p);
        if (vars.empty())
            options[j] = {0};
        if (options[j].empty()) {
            std::size_t best = 0, best_missing = vars.size() + 1;
            for (std::size_t p = 0; p < parts.size(); ++p) {
                auto missing = var_difference(vars, visible[p]).size();
                if (missing < best_missing) {
                    best_missing = missing;
                    best = p;
                }
            }
            const auto foreign = var_difference(vars, visible[best]).front();
            throw RuleShapeError("objective '" + to_string(cs[j]) + "' mentions '" + foreign +
                                 "', which is not local to any single part");
        }
    }

    struct Cand
    {
        std::size_t empty_parts;
        std::vector<std::size_t> assign;
    };
    std::vector<Cand> cands;
    std::vector<std::size_t> pick(cs.size(), 0);
    constexpr std::size_t kMax = 4096;
    for (;;) {
        std::vector<std::size_t> assign(cs.size());
        std::vector<bool> used(parts.size(), false);
        for (std::size_t j = 0; j < cs.size(); ++j) {
            assign[j] = options[j][pick[j]];
            used[assign[j]] = true;
        }
        cands.push_back({static_cast<std::size_t>(std::count(used.begin(), used.end(), false)), assign});
        if (cands.size() >= kMax)
            break;
        std::size_t j = 0;
        while (j < cs.size() && ++pick[j] == options[j].size())
            pick[j++] = 0;
        if (j == cs.size())
            break;
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return std::tie(a.empty_parts, a.assign) < std::tie(b.empty_parts, b.assign);
    });

    std::vector<RuleShape> out;
    for (const auto& c : cands) {
        RuleShape s;
        s.coalition = coalition;
        std::vector<std::vector<FormulaPtr>> per(parts.size());
        for (std::size_t j = 0; j < cs.size(); ++j)
            per[c.assign[j]].push_back(cs[j]);
        for (auto& v : per)
            s.part_objectives.push_back(fml::conj_all(v));
        out.push_back(std::move(s));
    }
    return out;
}

RuleShape check_rule_shape(const FormulaPtr& f, const System& sys,
                           const std::vector<std::vector<std::size_t>>& parts,
                           const std::vector<VarList>& visible)
{
    return rule_shape_candidates(f, sys, parts, visible).front();
}

} // namespace agv
