#include "agv/report.hpp"

#include <sstream>

namespace agv
{

using nlohmann::json;

json to_json(const LassoWord& w, const Alphabet& a)
{
    auto enc = [&](const std::vector<Letter>& ls) {
        json arr = json::array();
        for (auto l : ls) {
            json o = json::object();
            const auto val = a.valuation(l);
            for (const auto& [k, v] : val.entries())
                o[k] = v;
            arr.push_back(o);
        }
        return arr;
    };
    return {{"stem", enc(w.stem)}, {"loop", enc(w.loop)}, {"text", to_string(w, a)}};
}

json to_json(const JointStrategy& s, const System& sys)
{
    json out = json::object();
    for (std::size_t k = 0; k < s.coalition.size(); ++k) {
        const auto& ag = sys.agents.at(s.coalition[k]);
        json choices = json::object();
        for (std::size_t q = 0; q < s.strategies[k].choice.size(); ++q) {
            const auto c = s.strategies[k].choice[q];
            json moves = json::array();
            for (const auto& t : ag.repertoire.choices.at(q).at(c))
                moves.push_back(ag.module.state_names[t.from] + " -[" + ag.module.input_valuation(t.input).to_string() +
                                "]-> " + ag.module.state_names[t.to]);
            choices[ag.module.state_names[q]] = {{"choice", c}, {"moves", moves}};
        }
        out[ag.name] = choices;
    }
    return out;
}

json to_json(const VerificationResult& r, const System& sys)
{
    json j;
    j["result"] = verdict_name(r.verdict);
    j["states"] = r.stats.states;
    j["transitions"] = r.stats.transitions;
    j["strategies_examined"] = r.stats.strategies;
    j["time_ms"] = r.stats.seconds * 1000.0;
    j["witness"] = r.witness ? to_json(*r.witness, sys) : json(nullptr);
    if (r.witness && r.vacuous)
        j["vacuous"] = true;
    j["counterexample"] = r.counterexample ? to_json(*r.counterexample, r.cex_alphabet) : json(nullptr);
    if (!r.message.empty())
        j["message"] = r.message;
    return j;
}

json to_json(const GuaranteeResult& r, const Module& m)
{
    json j;
    j["result"] = r.holds ? "true" : "false";
    j["states"] = m.state_count();
    j["transitions"] = m.transitions.size();
    j["product_states"] = r.product_states;
    if (!r.holds) {
        json c;
        c["trace"] = describe_trace(m, r.cex_stem, r.cex_loop);
        if (r.word)
            c["word"] = to_json(*r.word, r.alphabet);
        j["counterexample"] = c;
    } else {
        j["counterexample"] = nullptr;
    }
    return j;
}

json to_json(const AgvReport& r, const System& sys)
{
    json j;
    j["result"] = agv_verdict_name(r.verdict);
    j["message"] = r.message;
    j["max_premise_states"] = r.max_premise_states();
    std::size_t strategies = 0;
    double ms = 0;
    json parts = json::array();
    for (const auto& p : r.parts) {
        json pj;
        json names = json::array();
        for (auto i : p.agents)
            names.push_back(sys.agents.at(i).name);
        pj["agents"] = names;
        pj["objective"] = p.objective ? to_string(p.objective) : "";
        pj["assumption"] = p.assumption;
        pj["strategy_premise"] = to_json(p.strategy, sys);
        pj["strategy_premise"]["states"] = p.strategy_states;
        if (p.guarantee_checked) {
            json nb = json::array();
            for (auto i : p.neighbors)
                nb.push_back(sys.agents.at(i).name);
            json g;
            g["k"] = p.k;
            g["neighborhood"] = nb;
            g["result"] = p.guarantee_ok ? "true" : "false";
            g["states"] = p.guarantee_states;
            g["product_states"] = p.guarantee.product_states;
            g["time_ms"] = p.guarantee_seconds * 1000.0;
            if (!p.guarantee_ok && p.guarantee.word)
                g["counterexample"] = to_json(*p.guarantee.word, p.guarantee.alphabet);
            if (!p.error.empty())
                g["error"] = p.error;
            pj["guarantee_premise"] = g;
        } else {
            pj["guarantee_premise"] = nullptr;
        }
        strategies += p.strategy.stats.strategies;
        ms += p.strategy.stats.seconds * 1000.0 + p.guarantee_seconds * 1000.0;
        parts.push_back(pj);
    }
    j["parts"] = parts;
    j["states"] = r.max_premise_states();
    j["strategies_examined"] = strategies;
    j["time_ms"] = ms;
    return j;
}

std::string describe(const VerificationResult& r, const System& sys)
{
    std::ostringstream os;
    os << "result: " << verdict_name(r.verdict) << "\n";
    os << "states: " << r.stats.states << "  transitions: " << r.stats.transitions
       << "  strategies examined: " << r.stats.strategies << "  time: " << r.stats.seconds * 1000.0 << " ms\n";
    if (r.witness)
        os << "witness: " << to_string(*r.witness, sys) << (r.vacuous ? " (blocks every run)" : "") << "\n";
    if (r.counterexample)
        os << "counterexample: " << to_string(*r.counterexample, r.cex_alphabet) << "\n";
    if (!r.message.empty())
        os << "note: " << r.message << "\n";
    return os.str();
}

std::string describe(const AgvReport& r, const System& sys)
{
    std::ostringstream os;
    os << "result: " << agv_verdict_name(r.verdict);
    if (!r.message.empty())
        os << " (" << r.message << ")";
    os << "\n";
    for (std::size_t i = 0; i < r.parts.size(); ++i) {
        const auto& p = r.parts[i];
        os << "part " << i + 1 << " {";
        for (std::size_t k = 0; k < p.agents.size(); ++k)
            os << (k ? "," : "") << sys.agents.at(p.agents[k]).name;
        os << "} objective " << (p.objective ? to_string(p.objective) : "?") << " under " << p.assumption << "\n";
        os << "  premise 1 (strategy): " << verdict_name(p.strategy.verdict) << ", " << p.strategy_states
           << " states";
        if (p.strategy.witness)
            os << ", witness " << to_string(*p.strategy.witness, sys);
        if (p.strategy.counterexample)
            os << ", counterexample " << to_string(*p.strategy.counterexample, p.strategy.cex_alphabet);
        os << "\n";
        if (p.guarantee_checked) {
            os << "  premise 2 (guarantee, k=" << p.k << ", neighbors:";
            for (auto j : p.neighbors)
                os << " " << sys.agents.at(j).name;
            os << "): " << (p.guarantee_ok ? "true" : "false") << ", " << p.guarantee_states << " states";
            if (!p.guarantee_ok && p.guarantee.word)
                os << ", counterexample " << to_string(*p.guarantee.word, p.guarantee.alphabet);
            if (!p.error.empty())
                os << ", " << p.error;
            os << "\n";
        } else {
            os << "  premise 2: not checked\n";
        }
    }
    return os.str();
}

} // namespace agv
