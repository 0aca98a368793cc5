#include <algorithm>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "agv/cli.hpp"
#include "agv/generators.hpp"
#include "agv/guarantee.hpp"
#include "agv/model_io.hpp"
#include "agv/report.hpp"
#include "agv/rules.hpp"

namespace py = pybind11;
using namespace agv;

namespace
{

// json -> Python objects via the json module; keeps the binding small.
py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

AgentSet agents_of(const System& sys, const std::vector<std::string>& refs)
{
    AgentSet out;
    for (const auto& r : refs)
        out.push_back(sys.resolve_agent(r));
    std::sort(out.begin(), out.end());
    return out;
}

const Assumption& assumption_of(const Benchmark& b, const std::string& name)
{
    const auto* a = find_assumption(b, name);
    if (!a)
        throw ModelError("unknown assumption '" + name + "'");
    return *a;
}

} // namespace

PYBIND11_MODULE(_agv, m)
{
    m.doc() = "assume-guarantee verification of strategic abilities";

    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<AutomatonTooLarge>(m, "AutomatonTooLarge", PyExc_RuntimeError);
    py::register_exception<FormulaSyntaxError>(m, "FormulaSyntaxError", PyExc_ValueError);
    py::register_exception<RuleShapeError>(m, "RuleShapeError", PyExc_ValueError);

    py::class_<Benchmark>(m, "Model")
        .def_property_readonly("agents",
                               [](const Benchmark& b) {
                                   std::vector<std::string> names;
                                   for (const auto& a : b.system.agents)
                                       names.push_back(a.name);
                                   return names;
                               })
        .def_property_readonly("assumptions",
                               [](const Benchmark& b) {
                                   std::vector<std::string> names;
                                   for (const auto& [k, v] : b.assumptions)
                                       names.push_back(k);
                                   return names;
                               })
        .def_property_readonly("domain", [](const Benchmark& b) { return b.system.domain; })
        .def("serialize", [](const Benchmark& b) { return serialize(b); })
        .def("states", [](const Benchmark& b, const std::vector<std::string>& agents) {
            AgentSet ids = agents.empty() ? AgentSet{} : agents_of(b.system, agents);
            if (agents.empty())
                for (std::size_t i = 0; i < b.system.agents.size(); ++i)
                    ids.push_back(i);
            return reachable(comp_module(b.system, ids)).states;
        }, py::arg("agents") = std::vector<std::string>{});

    m.def("load_model", &load_model, py::arg("spec"), "builtin name (tgcN, robotsR_L_E[_split]) or file path");
    m.def("parse_model", &parse_model_file, py::arg("text"));
    m.def("gen_tgc", &gen_tgc, py::arg("n"));
    m.def("gen_robots", &gen_robots, py::arg("robots"), py::arg("length"), py::arg("energy"),
          py::arg("split") = false);
    m.def("formula", [](const std::string& text) { return to_string(parse_formula(text)); }, py::arg("text"),
          "parse and print back in canonical form");

    m.def(
        "verify",
        [](const Benchmark& b, const std::string& formula, std::size_t max_strategies) {
            SynthesisOptions o;
            o.max_strategies = max_strategies;
            const auto f = parse_formula(formula);
            VerificationResult r;
            {
                py::gil_scoped_release nogil;
                r = verify(b.system, f, Semantics::ir, o);
            }
            return to_py(to_json(r, b.system));
        },
        py::arg("model"), py::arg("formula"), py::arg("max_strategies") = 0);

    m.def(
        "guarantees",
        [](const Benchmark& b, const std::vector<std::string>& agents, const std::string& assumption) {
            const auto mod = comp_module(b.system, agents_of(b.system, agents));
            auto r = guarantees(mod, assumption_of(b, assumption));
            return to_py(to_json(r, mod));
        },
        py::arg("model"), py::arg("agents"), py::arg("assumption"));

    m.def(
        "agverify",
        [](const Benchmark& b, const std::vector<std::pair<std::string, std::string>>& objectives,
           const std::vector<std::string>& assumptions, int k) {
            AgentSet c;
            std::vector<FormulaPtr> objs;
            std::vector<Assumption> as;
            if (assumptions.size() != objectives.size())
                throw ModelError("one assumption per objective is required");
            for (std::size_t i = 0; i < objectives.size(); ++i) {
                c.push_back(b.system.resolve_agent(objectives[i].first));
                objs.push_back(parse_formula(objectives[i].second));
                as.push_back(assumptions[i] == "trivial" ? trivial_assumption(b.system, {c.back()})
                                                         : assumption_of(b, assumptions[i]));
            }
            RuleOptions o;
            o.k = k > 0 ? k : 1;
            o.auto_k = k <= 0;
            auto r = apply_rule_rk(b.system, c, objs, as, o);
            return to_py(to_json(r, b.system));
        },
        py::arg("model"), py::arg("objectives"), py::arg("assumptions"), py::arg("k") = 1,
        "objectives: [(agent, formula)], assumptions aligned with them; k <= 0 means auto");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
