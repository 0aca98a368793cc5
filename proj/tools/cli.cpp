#include "agv/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <map>

#include "agv/generators.hpp"
#include "agv/model_io.hpp"
#include "agv/report.hpp"
#include "agv/rules.hpp"

namespace agv
{

namespace
{

using nlohmann::json;

int exit_for(Verdict v)
{
    switch (v) {
    case Verdict::True: return kExitTrue;
    case Verdict::False: return kExitFalse;
    default: return kExitInconclusive;
    }
}

int exit_for(AgvVerdict v)
{
    switch (v) {
    case AgvVerdict::Derived: return kExitTrue;
    case AgvVerdict::PremiseFailed: return kExitInconclusive;
    default: return kExitError;
    }
}

std::vector<std::string> split_list(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + sep) {
        if (c == sep) {
            auto b = cur.find_first_not_of(" \t");
            auto e = cur.find_last_not_of(" \t");
            if (b != std::string::npos)
                out.push_back(cur.substr(b, e - b + 1));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

AgentSet agent_list(const System& sys, const std::string& s)
{
    AgentSet out;
    for (const auto& ref : split_list(s, ','))
        out.push_back(sys.resolve_agent(ref));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::pair<std::string, std::string> keyed(const std::string& s, const char* what)
{
    const auto c = s.find(':');
    if (c == std::string::npos || c == 0)
        throw ModelError(std::string("expected <part>:<") + what + ">, got '" + s + "'");
    return {s.substr(0, c), s.substr(c + 1)};
}

Assumption resolve_assumption(const Benchmark& b, const std::string& spec, const AgentSet& coalition)
{
    if (spec == "trivial")
        return trivial_assumption(b.system, coalition);
    if (const auto* a = find_assumption(b, spec))
        return *a;
    auto file = load_model_file(spec);
    if (file.assumptions.empty())
        throw ModelError("no assumption named '" + spec + "' and no assumption block in such a file");
    return file.assumptions.begin()->second;
}

struct Common
{
    std::string model;
    bool json = false;
    std::string semantics = "ir";
    bool eager = false;
    std::size_t max_strategies = 0;

    void add(CLI::App* app)
    {
        app->add_option("--model", model, "model file or builtin (tgcN, robotsR_L_E[_split])")->required();
        app->add_flag("--json", json, "machine-readable report");
        app->add_option("--semantics", semantics, "strategy semantics (ir)")->check(CLI::IsMember({"ir", "iR"}));
        app->add_flag("--enumerate", eager, "enumerate all strategies instead of the pruned search");
        app->add_option("--max-strategies", max_strategies, "give up after this many candidates (0 = no limit)");
    }

    [[nodiscard]] SynthesisOptions synthesis() const { return {!eager, max_strategies}; }
    [[nodiscard]] Semantics sem() const { return semantics == "iR" ? Semantics::iR : Semantics::ir; }
};

int cmd_verify(const Common& c, const std::string& formula, const std::string& assume, std::ostream& out)
{
    const auto b = load_model(c.model);
    const auto f = parse_formula(formula);
    VerificationResult r;
    if (!assume.empty()) {
        const auto a = resolve_assumption(b, assume, {});
        r = verify(make_arena(b.system, &a), f, c.sem(), c.synthesis());
    } else {
        r = verify(b.system, f, c.sem(), c.synthesis());
    }
    if (c.json) {
        auto j = to_json(r, b.system);
        j["formula"] = to_string(f);
        out << j.dump(2) << "\n";
    } else {
        out << "formula: " << to_string(f) << "\n" << describe(r, b.system);
    }
    return exit_for(r.verdict);
}

struct AgArgs
{
    std::string rule = "rk";
    std::string k = "1";
    std::string part;
    std::vector<std::string> objs;
    std::vector<std::string> assumes;
    std::string formula;
    bool exclude = false;
};

int cmd_agverify(const Common& c, const AgArgs& a, std::ostream& out)
{
    const auto b = load_model(c.model);
    const auto& sys = b.system;
    if (c.sem() == Semantics::iR)
        throw ModelError("perfect-recall (iR) strategy synthesis is not supported");
    RuleOptions opts;
    opts.synthesis = c.synthesis();
    opts.exclude_coalition = a.exclude;
    if (a.k == "auto") {
        opts.auto_k = true;
    } else {
        try {
            opts.k = std::stoi(a.k);
        } catch (const std::exception&) {
            throw ModelError("--k expects an integer or 'auto'");
        }
    }

    // Parts, in the order objectives and assumptions refer to them.
    Partition p;
    const bool part_rule = a.rule == "part";
    if (part_rule) {
        if (a.part.empty())
            throw ModelError("--rule part needs --part");
        for (const auto& grp : split_list(a.part, '|'))
            p.parts.push_back(agent_list(sys, grp));
    }
    auto part_of = [&](const std::string& key) -> std::size_t {
        if (part_rule) {
            // 1-based part number, or any agent of the part
            if (std::all_of(key.begin(), key.end(), ::isdigit)) {
                const auto n = static_cast<std::size_t>(std::stoul(key));
                if (n >= 1 && n <= p.parts.size())
                    return n - 1;
            }
            const auto ag = sys.resolve_agent(key);
            for (std::size_t i = 0; i < p.parts.size(); ++i)
                if (std::count(p.parts[i].begin(), p.parts[i].end(), ag))
                    return i;
            throw ModelError("'" + key + "' does not name a part");
        }
        const auto ag = sys.resolve_agent(key);
        for (std::size_t i = 0; i < p.parts.size(); ++i)
            if (p.parts[i].front() == ag)
                return i;
        p.parts.push_back({ag});
        return p.parts.size() - 1;
    };

    FormulaPtr goal;
    if (!a.formula.empty()) {
        goal = parse_formula(a.formula);
        if (classify(goal) != FormulaClass::OneATLs)
            throw RuleShapeError("--formula must be a single strategic formula <<C>>(psi_1 & ... & psi_m)");
        if (!part_rule)
            for (auto i : resolve_coalition(*goal, sys))
                part_of(std::to_string(i + 1));
    }
    std::map<std::size_t, std::vector<FormulaPtr>> objs;
    for (const auto& s : a.objs) {
        auto [k, f] = keyed(s, "formula");
        objs[part_of(k)].push_back(parse_formula(f));
    }
    std::map<std::size_t, std::string> assume_spec;
    for (const auto& s : a.assumes) {
        auto [k, v] = keyed(s, "assumption");
        assume_spec[part_of(k)] = v;
    }
    if (p.parts.empty())
        throw ModelError("no parts: give --obj, --formula or --part");
    const auto coalition = p.coalition();
    std::vector<Assumption> assumptions;
    for (std::size_t i = 0; i < p.parts.size(); ++i) {
        auto it = assume_spec.find(i);
        if (it == assume_spec.end())
            throw ModelError("missing --assume for part " + std::to_string(i + 1));
        assumptions.push_back(resolve_assumption(b, it->second, coalition));
    }

    AgvReport rep;
    std::vector<FormulaPtr> chosen;
    std::size_t tried = 0;
    if (goal) {
        if (!objs.empty())
            throw ModelError("--formula and --obj are mutually exclusive");
        std::vector<VarList> visible;
        for (std::size_t i = 0; i < p.parts.size(); ++i) {
            VarList v = assumptions[i].module.state_vars;
            for (auto ag : p.parts[i])
                v = var_union(v, sys.agents[ag].module.state_vars);
            visible.push_back(v);
        }
        const auto shapes = rule_shape_candidates(goal, sys, p.parts, visible);
        for (const auto& sh : shapes) {
            ++tried;
            auto r = apply_rule_part(sys, p, sh.part_objectives, assumptions, opts);
            const bool first = tried == 1;
            if (first || r.verdict == AgvVerdict::Derived) {
                rep = std::move(r);
                chosen = sh.part_objectives;
            }
            if (rep.verdict == AgvVerdict::Derived || rep.verdict == AgvVerdict::Error)
                break;
        }
    } else {
        for (std::size_t i = 0; i < p.parts.size(); ++i) {
            auto it = objs.find(i);
            if (it == objs.end())
                throw ModelError("missing --obj for part " + std::to_string(i + 1));
            chosen.push_back(fml::conj_all(it->second));
        }
        rep = apply_rule_part(sys, p, chosen, assumptions, opts);
    }

    const auto conclusion = rule_conclusion(sys, p, chosen);
    if (c.json) {
        auto j = to_json(rep, sys);
        j["rule"] = part_rule ? "part" : "rk";
        j["conclusion"] = to_string(conclusion);
        if (goal)
            j["decompositions_tried"] = tried;
        out << j.dump(2) << "\n";
    } else {
        out << "rule: " << (part_rule ? "Part" : "R") << "  conclusion: " << to_string(conclusion) << "\n";
        if (goal)
            out << "decompositions tried: " << tried << "\n";
        out << describe(rep, sys);
        if (rep.verdict == AgvVerdict::Derived)
            out << "the conclusion holds in the full system\n";
        else if (rep.verdict == AgvVerdict::PremiseFailed)
            out << "inconclusive: a failed premise does not refute the conclusion\n";
    }
    return exit_for(rep.verdict);
}

int cmd_guarantee(const Common& c, const std::string& agents, const std::string& assume, std::ostream& out)
{
    const auto b = load_model(c.model);
    AgentSet idx;
    if (agents.empty())
        for (std::size_t i = 0; i < b.system.size(); ++i)
            idx.push_back(i);
    else
        idx = agent_list(b.system, agents);
    const auto m = comp_module(b.system, idx);
    const auto a = resolve_assumption(b, assume, {});
    const auto start = std::chrono::steady_clock::now();
    const auto r = guarantees(m, a);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (c.json) {
        auto j = to_json(r, m);
        j["assumption"] = a.name;
        j["time_ms"] = ms;
        j["strategies_examined"] = 0;
        j["witness"] = nullptr;
        out << j.dump(2) << "\n";
    } else {
        out << "module: " << m.state_count() << " states, " << m.transitions.size() << " transitions\n";
        out << "guarantees " << a.name << ": " << (r.holds ? "true" : "false") << "\n";
        if (!r.holds) {
            out << "trace: " << describe_trace(m, r.cex_stem, r.cex_loop) << "\n";
            if (r.word)
                out << "word: " << to_string(*r.word, r.alphabet) << "\n";
        }
    }
    return r.holds ? kExitTrue : kExitFalse;
}

int cmd_compose(const Common& c, const std::string& agents, bool print, std::ostream& out)
{
    const auto b = load_model(c.model);
    AgentSet idx;
    if (agents.empty())
        for (std::size_t i = 0; i < b.system.size(); ++i)
            idx.push_back(i);
    else
        idx = agent_list(b.system, agents);
    const auto start = std::chrono::steady_clock::now();
    const auto m = comp_module(b.system, idx);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (c.json) {
        json j{{"result", "true"},
               {"states", m.state_count()},
               {"transitions", m.transitions.size()},
               {"strategies_examined", 0},
               {"time_ms", ms},
               {"witness", nullptr},
               {"counterexample", nullptr}};
        if (print)
            j["module"] = serialize_module(m);
        out << j.dump(2) << "\n";
    } else {
        out << "states: " << m.state_count() << "  transitions: " << m.transitions.size() << "\n";
        if (print)
            out << "agent composed\n" << serialize_module(m) << "end\n";
    }
    return kExitTrue;
}

struct BenchRow
{
    std::string config;
    std::string mono_verdict;
    std::size_t mono_states = 0, mono_transitions = 0, mono_strategies = 0;
    double mono_ms = 0;
    std::string ag_verdict;
    std::size_t ag_states = 0, ag_strategies = 0;
    double ag_ms = 0;
};

BenchRow bench_robots(int r, int l, int e, bool split, const SynthesisOptions& so)
{
    BenchRow row;
    row.config = std::to_string(r) + "," + std::to_string(l) + "," + std::to_string(e) + (split ? " split" : "");
    const auto b = gen_robots(r, l, e, split);
    const auto& sys = b.system;
    std::vector<std::string> robots;
    for (int i = 1; i <= r; ++i)
        robots.push_back("r" + std::to_string(i));

    FormulaPtr mono;
    Partition p;
    std::vector<FormulaPtr> objs;
    std::vector<Assumption> as;
    if (!split) {
        std::string energy, delivered;
        for (int i = 1; i <= r; ++i) {
            energy += (i > 1 ? " & " : "") + robot_energy_positive(i, e);
            delivered += (i > 1 ? " | " : "") + ("del" + std::to_string(i) + "=1");
        }
        mono = fml::coop(robots, parse_formula("(" + energy + ") U (" + delivered + ")"));
        for (int i = 1; i <= r; ++i) {
            p.parts.push_back({static_cast<std::size_t>(i - 1)});
            objs.push_back(i == 1 ? parse_formula("F del1=1")
                                  : parse_formula("G " + robot_energy_positive(i, e)));
            as.push_back(b.assumptions.at("D" + std::to_string(i)));
        }
    } else {
        const int h = r / 2;
        std::string body;
        for (int i = 1; i <= h; ++i) {
            const auto pair = "(del" + std::to_string(i) + "=1 | del" + std::to_string(i + h) + "=1)";
            body += (i > 1 ? " & " : "") + pair;
            p.parts.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i + h - 1)});
            objs.push_back(parse_formula("F G " + pair));
            // The pair's environment: its two depots, every state accepting.
            const AgentSet depots{static_cast<std::size_t>(r + i - 1), static_cast<std::size_t>(r + i + h - 1)};
            Assumption a;
            a.name = "D" + std::to_string(i) + "+D" + std::to_string(i + h);
            a.module = comp_module(sys, depots);
            a.accepting.assign(a.module.state_count(), true);
            as.push_back(std::move(a));
        }
        mono = fml::coop(robots, parse_formula("F G (" + body + ")"));
    }

    const auto mv = verify(sys, mono, Semantics::ir, so);
    row.mono_verdict = verdict_name(mv.verdict);
    row.mono_states = mv.stats.states;
    row.mono_transitions = mv.stats.transitions;
    row.mono_strategies = mv.stats.strategies;
    row.mono_ms = mv.stats.seconds * 1000;

    RuleOptions ro;
    ro.synthesis = so;
    const auto start = std::chrono::steady_clock::now();
    const auto rep = apply_rule_part(sys, p, objs, as, ro);
    row.ag_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    row.ag_verdict = agv_verdict_name(rep.verdict);
    row.ag_states = rep.max_premise_states();
    for (const auto& pr : rep.parts)
        row.ag_strategies += pr.strategy.stats.strategies;
    return row;
}

int cmd_bench(const Common& c, bool quick, std::ostream& out)
{
    std::vector<std::tuple<int, int, int, bool>> configs{{1, 2, 1, false}, {2, 2, 2, false}, {2, 3, 2, false},
                                                         {2, 2, 2, true}};
    if (!quick) {
        configs.push_back({3, 2, 2, false});
        configs.push_back({2, 3, 3, true});
        configs.push_back({4, 2, 2, true});
    }
    json rows = json::array();
    if (!c.json)
        out << std::left << std::setw(14) << "config" << std::setw(14) << "monolithic" << std::setw(8) << "#st"
            << std::setw(8) << "#tr" << std::setw(8) << "DFS" << std::setw(11) << "ms" << std::setw(16) << "AG"
            << std::setw(10) << "max #st" << std::setw(8) << "DFS" << "ms\n";
    for (auto [r, l, e, split] : configs) {
        const auto row = bench_robots(r, l, e, split, c.synthesis());
        if (c.json) {
            rows.push_back({{"config", row.config},
                            {"monolithic", {{"result", row.mono_verdict},
                                            {"states", row.mono_states},
                                            {"transitions", row.mono_transitions},
                                            {"strategies_examined", row.mono_strategies},
                                            {"time_ms", row.mono_ms}}},
                            {"agv", {{"result", row.ag_verdict},
                                     {"states", row.ag_states},
                                     {"strategies_examined", row.ag_strategies},
                                     {"time_ms", row.ag_ms}}}});
        } else {
            out << std::left << std::setw(14) << row.config << std::setw(14) << row.mono_verdict << std::setw(8)
                << row.mono_states << std::setw(8) << row.mono_transitions << std::setw(8) << row.mono_strategies
                << std::setw(11) << std::fixed << std::setprecision(2) << row.mono_ms << std::setw(16)
                << row.ag_verdict << std::setw(10) << row.ag_states << std::setw(8) << row.ag_strategies
                << row.ag_ms << "\n";
        }
    }
    if (c.json)
        out << json{{"result", "true"}, {"rows", rows}}.dump(2) << "\n";
    return kExitTrue;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Assume-guarantee verification of strategic abilities in asynchronous systems", "agvcheck"};
    app.require_subcommand(1);

    Common verify_c, ag_c, guar_c, comp_c, bench_c;
    std::string formula, assume;
    auto* v = app.add_subcommand("verify", "model-check a formula on the full system");
    verify_c.add(v);
    v->add_option("--formula", formula, "formula, e.g. \"<<1,2>>(G F x1=1 & G F x2=1)\"")->required();
    v->add_option("--assume", assume, "attach an assumption (extended semantics)");

    AgArgs ag;
    auto* a = app.add_subcommand("agverify", "apply an assume-guarantee rule");
    ag_c.add(a);
    a->add_option("--rule", ag.rule, "rk or part")->check(CLI::IsMember({"rk", "part"}));
    a->add_option("--k", ag.k, "neighbourhood depth or 'auto'");
    a->add_option("--part", ag.part, "partition, e.g. \"1,3|2,4\"");
    a->add_option("--obj", ag.objs, "part:formula (repeatable)");
    a->add_option("--assume", ag.assumes, "part:name|path|trivial (repeatable)");
    a->add_option("--formula", ag.formula, "conclusion to decompose instead of --obj");
    a->add_flag("--exclude-coalition", ag.exclude, "leave coalition members out of neighbourhoods");

    std::string g_agents, g_assume;
    auto* g = app.add_subcommand("guarantee", "check whether a composition guarantees an assumption");
    guar_c.add(g);
    g->add_option("--agents", g_agents, "agents to compose (default: all)");
    g->add_option("--assume", g_assume, "assumption name or file")->required();

    std::string c_agents;
    bool print = false;
    auto* c = app.add_subcommand("compose", "compose agents and report the size");
    comp_c.add(c);
    c->add_option("--agents", c_agents, "agents to compose (default: all)");
    c->add_flag("--print", print, "print the composed module");

    bool quick = false;
    auto* bch = app.add_subcommand("bench", "robot benchmark: monolithic versus assume-guarantee");
    bch->add_flag("--json", bench_c.json, "machine-readable report");
    bch->add_flag("--quick", quick, "small configurations only");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitTrue;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitTrue;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitError;
    }

    try {
        if (v->parsed())
            return cmd_verify(verify_c, formula, assume, out);
        if (a->parsed())
            return cmd_agverify(ag_c, ag, out);
        if (g->parsed())
            return cmd_guarantee(guar_c, g_agents, g_assume, out);
        if (c->parsed())
            return cmd_compose(comp_c, c_agents, print, out);
        if (bch->parsed())
            return cmd_bench(bench_c, quick, out);
    } catch (const FormulaSyntaxError& e) {
        err << "formula error: " << e.what() << "\n";
    } catch (const RuleShapeError& e) {
        err << "rule shape error: " << e.what() << "\n";
    } catch (const AutomatonTooLarge& e) {
        err << "error: " << e.what() << "\n";
    } catch (const ModelError& e) {
        err << "model error: " << e.what() << "\n";
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitError;
}

} // namespace agv
