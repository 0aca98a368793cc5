#include "agv/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace agv
{

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, const std::string& seps)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (seps.find(ch) != std::string::npos) {
            if (!trim(cur).empty())
                out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty())
        out.push_back(trim(cur));
    return out;
}

int parse_int(const std::string& s, int line)
{
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos == s.size())
            return v;
    } catch (const std::exception&) {
    }
    throw ModelParseError(line, "expected a number, got '" + s + "'");
}

struct Edge
{
    std::string to;
    Guard guard;
};

struct Block
{
    bool assumption = false;
    std::string name;
    int line = 0;
    std::vector<std::string> svars, ivars;
    bool have_svars = false, have_ivars = false;
    std::vector<std::pair<std::string, Valuation>> states;
    std::vector<int> state_lines;
    std::string init;
    int init_line = 0;
    std::vector<std::pair<std::string, Edge>> trans;
    std::vector<int> trans_lines;
    std::vector<std::pair<std::string, std::vector<Edge>>> choices;
    std::vector<int> choice_lines;
    std::vector<std::string> accepting;
    int accepting_line = 0;
};

class Parser
{
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Benchmark run()
    {
        std::istringstream in(text_);
        std::string raw;
        int ln = 0;
        std::optional<Block> cur;
        bool seen_block = false;
        while (std::getline(in, raw)) {
            ++ln;
            if (auto h = raw.find('#'); h != std::string::npos)
                raw.resize(h);
            const auto line = trim(raw);
            if (line.empty())
                continue;
            const auto sp = line.find_first_of(" \t");
            const auto kw = line.substr(0, sp);
            const auto rest = sp == std::string::npos ? std::string{} : trim(line.substr(sp));

            if (kw == "domain") {
                if (seen_block || cur)
                    throw ModelParseError(ln, "'domain' must precede all blocks");
                domain_ = parse_int(rest, ln);
                if (domain_ < 1)
                    throw ModelParseError(ln, "domain must be positive");
                continue;
            }
            if (kw == "agent" || kw == "assumption") {
                if (cur)
                    throw ModelParseError(ln, "missing 'end' before new block");
                if (rest.empty() || rest.find_first_of(" \t") != std::string::npos)
                    throw ModelParseError(ln, "expected a single block name");
                cur = Block{};
                cur->assumption = kw == "assumption";
                cur->name = rest;
                cur->line = ln;
                seen_block = true;
                continue;
            }
            if (!cur)
                throw ModelParseError(ln, "'" + kw + "' outside of an agent or assumption block");
            auto& b = *cur;
            if (kw == "end") {
                finish(b, ln);
                cur.reset();
            } else if (kw == "statevars") {
                b.svars = split(rest, ", \t");
                b.have_svars = true;
            } else if (kw == "inputvars") {
                b.ivars = split(rest, ", \t");
                b.have_ivars = true;
            } else if (kw == "state") {
                auto toks = split(rest, ", \t");
                if (toks.empty())
                    throw ModelParseError(ln, "state without a name");
                Valuation v;
                for (std::size_t i = 1; i < toks.size(); ++i) {
                    auto [var, val] = assignment(toks[i], ln);
                    if (!contains(b.svars, var))
                        throw ModelParseError(ln, "undeclared state variable '" + var + "'");
                    if (v.defines(var))
                        throw ModelParseError(ln, "variable '" + var + "' assigned twice");
                    v.set(var, val);
                }
                b.states.push_back({toks[0], v});
                b.state_lines.push_back(ln);
            } else if (kw == "init") {
                b.init = rest;
                b.init_line = ln;
            } else if (kw == "trans") {
                const auto arrow = rest.find("->");
                if (arrow == std::string::npos)
                    throw ModelParseError(ln, "expected 'trans <from> -> <to> [when ...]'");
                const auto from = trim(rest.substr(0, arrow));
                b.trans.push_back({from, edge(b, trim(rest.substr(arrow + 2)), ln)});
                b.trans_lines.push_back(ln);
            } else if (kw == "choice") {
                const auto colon = rest.find(':');
                if (colon == std::string::npos)
                    throw ModelParseError(ln, "expected 'choice <state>: <target> [when ...]; ...'");
                std::vector<Edge> es;
                for (const auto& part : split(rest.substr(colon + 1), ";"))
                    es.push_back(edge(b, part, ln));
                if (es.empty())
                    throw ModelParseError(ln, "empty repertoire group");
                b.choices.push_back({trim(rest.substr(0, colon)), es});
                b.choice_lines.push_back(ln);
            } else if (kw == "accepting") {
                if (!b.assumption)
                    throw ModelParseError(ln, "'accepting' is only allowed in assumptions");
                b.accepting = split(rest, ", \t");
                b.accepting_line = ln;
            } else {
                throw ModelParseError(ln, "unknown keyword '" + kw + "'");
            }
        }
        if (cur)
            throw ModelParseError(ln, "missing 'end' for block '" + cur->name + "'");
        out_.system.domain = domain_;
        return std::move(out_);
    }

private:
    const std::string& text_;
    int domain_ = 2;
    Benchmark out_;
    std::set<std::string> names_;

    static bool contains(const std::vector<std::string>& v, const std::string& s)
    {
        return std::find(v.begin(), v.end(), s) != v.end();
    }

    std::pair<std::string, Value> assignment(const std::string& tok, int ln) const
    {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ModelParseError(ln, "expected var=value, got '" + tok + "'");
        const auto v = parse_int(tok.substr(eq + 1), ln);
        if (v < 0 || v >= domain_)
            throw ModelParseError(ln, "value " + std::to_string(v) + " outside domain 0.." + std::to_string(domain_ - 1));
        return {tok.substr(0, eq), v};
    }

    Edge edge(const Block& b, const std::string& text, int ln) const
    {
        Edge e;
        const auto w = text.find(" when ");
        e.to = trim(w == std::string::npos ? text : text.substr(0, w));
        if (e.to.empty() || e.to.find_first_of(" \t") != std::string::npos)
            throw ModelParseError(ln, "bad target '" + e.to + "'");
        if (w == std::string::npos)
            return e;
        for (const auto& g : split(text.substr(w + 6), ",")) {
            const auto eq = g.find('=');
            if (eq == std::string::npos)
                throw ModelParseError(ln, "expected var=value in guard, got '" + g + "'");
            const auto var = trim(g.substr(0, eq));
            if (!contains(b.ivars, var))
                throw ModelParseError(ln, "guard on undeclared input variable '" + var + "'");
            if (e.guard.contains(var))
                throw ModelParseError(ln, "variable '" + var + "' guarded twice");
            auto& vals = e.guard[var];
            for (const auto& s : split(g.substr(eq + 1), "|")) {
                const auto v = parse_int(s, ln);
                if (v < 0 || v >= domain_)
                    throw ModelParseError(ln, "value " + std::to_string(v) + " outside domain 0.." +
                                                  std::to_string(domain_ - 1));
                vals.push_back(v);
            }
            if (vals.empty())
                throw ModelParseError(ln, "empty value list for '" + var + "'");
        }
        return e;
    }

    void finish(Block& b, int end_line)
    {
        if (!names_.insert(b.name).second)
            throw ModelParseError(b.line, "duplicate block name '" + b.name + "'");
        for (const auto& v : b.ivars)
            if (contains(b.svars, v))
                throw ModelParseError(b.line, "variable '" + v + "' is both a state and an input variable");
        if (b.states.empty())
            throw ModelParseError(end_line, "block '" + b.name + "' has no states");
        ModuleBuilder mb(domain_, b.svars, b.ivars);
        std::map<std::string, StateId> ids;
        for (std::size_t i = 0; i < b.states.size(); ++i) {
            const auto& [name, label] = b.states[i];
            if (ids.contains(name))
                throw ModelParseError(b.state_lines[i], "duplicate state '" + name + "'");
            for (const auto& v : b.svars)
                if (!label.defines(v))
                    throw ModelParseError(b.state_lines[i], "state '" + name + "' does not set '" + v + "'");
            ids[name] = mb.add_state(name, label);
        }
        auto state = [&](const std::string& n, int ln) {
            auto it = ids.find(n);
            if (it == ids.end())
                throw ModelParseError(ln, "unknown state '" + n + "'");
            return it->second;
        };
        if (b.init.empty())
            throw ModelParseError(end_line, "block '" + b.name + "' has no 'init'");
        mb.set_initial(state(b.init, b.init_line));
        for (std::size_t i = 0; i < b.trans.size(); ++i) {
            const auto& [from, e] = b.trans[i];
            mb.add_transition(state(from, b.trans_lines[i]), state(e.to, b.trans_lines[i]), e.guard);
        }
        Module m = mb.build(true);

        if (b.assumption) {
            if (!b.choices.empty())
                throw ModelParseError(b.choice_lines.front(), "assumptions have no repertoire");
            Assumption a;
            a.name = b.name;
            a.accepting.assign(m.state_count(), false);
            for (const auto& n : b.accepting)
                a.accepting[state(n, b.accepting_line)] = true;
            a.module = std::move(m);
            out_.assumptions[a.name] = std::move(a);
            return;
        }

        Repertoire r = Repertoire::singletons(m);
        std::vector<bool> explicit_choice(m.state_count(), false);
        for (std::size_t i = 0; i < b.choices.size(); ++i) {
            const auto ln = b.choice_lines[i];
            const auto q = state(b.choices[i].first, ln);
            if (!explicit_choice[q]) {
                explicit_choice[q] = true;
                r.choices[q].clear();
            }
            std::vector<Transition> set;
            for (const auto& e : b.choices[i].second) {
                const auto to = state(e.to, ln);
                for (auto l : mb.letters(e.guard)) {
                    Transition t{q, l, to};
                    if (!m.find_transition(t))
                        throw ModelParseError(ln, "choice uses a move " + b.choices[i].first + " -> " + e.to +
                                                      " that is not a transition");
                    set.push_back(t);
                }
            }
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
            if (set.empty())
                throw ModelParseError(ln, "empty repertoire group");
            r.choices[q].push_back(std::move(set));
        }
        if (auto bad = validate_repertoire(m, r); !bad.empty())
            throw ModelParseError(b.line, "repertoire of '" + b.name + "': " + bad.front().message);
        out_.system.agents.push_back({b.name, std::move(m), std::move(r)});
    }
};

std::string guard_text(const Module& m, const std::vector<Letter>& letters)
{
    // Letters must form a product of per-variable value sets.
    const auto codec = m.input_codec();
    if (m.input_vars.empty())
        return {};
    std::vector<std::set<Value>> vals(m.input_vars.size());
    for (auto l : letters) {
        auto d = codec.decode(l);
        for (std::size_t i = 0; i < d.size(); ++i)
            vals[i].insert(d[i]);
    }
    std::string out;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (static_cast<int>(vals[i].size()) == m.domain)
            continue;
        out += out.empty() ? " when " : ", ";
        out += m.input_vars[i] + "=";
        bool first = true;
        for (auto v : vals[i]) {
            out += (first ? "" : "|") + std::to_string(v);
            first = false;
        }
    }
    return out;
}

bool is_product(const Module& m, const std::vector<Letter>& letters)
{
    const auto codec = m.input_codec();
    std::vector<std::set<Value>> vals(m.input_vars.size());
    for (auto l : letters) {
        auto d = codec.decode(l);
        for (std::size_t i = 0; i < d.size(); ++i)
            vals[i].insert(d[i]);
    }
    std::size_t n = 1;
    for (const auto& s : vals)
        n *= s.size();
    return n == letters.size();
}

std::string join(const std::vector<std::string>& v, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? sep : "") + v[i];
    return out;
}

} // namespace

Benchmark parse_model_file(const std::string& text)
{
    return Parser(text).run();
}

Benchmark load_model_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ModelError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_file(ss.str());
}

std::string serialize_module(const Module& m, const std::string& ind)
{
    std::string out;
    if (!m.state_vars.empty())
        out += ind + "statevars " + join(m.state_vars, " ") + "\n";
    if (!m.input_vars.empty())
        out += ind + "inputvars " + join(m.input_vars, " ") + "\n";
    for (StateId q = 0; q < m.state_count(); ++q) {
        out += ind + "state " + m.state_names[q];
        for (std::size_t i = 0; i < m.state_vars.size(); ++i)
            out += " " + m.state_vars[i] + "=" + std::to_string(m.labels[q][i]);
        out += "\n";
    }
    out += ind + "init " + m.state_names[m.initial] + "\n";
    for (StateId q = 0; q < m.state_count(); ++q) {
        std::map<StateId, std::vector<Letter>> by_target;
        for (const auto& t : m.outgoing(q))
            by_target[t.to].push_back(t.input);
        for (const auto& [to, ls] : by_target) {
            const auto head = ind + "trans " + m.state_names[q] + " -> " + m.state_names[to];
            if (is_product(m, ls)) {
                out += head + guard_text(m, ls) + "\n";
            } else {
                for (auto l : ls)
                    out += head + guard_text(m, {l}) + "\n";
            }
        }
    }
    return out;
}

std::string serialize(const Benchmark& b)
{
    std::string out = "domain " + std::to_string(b.system.domain) + "\n";
    for (const auto& ag : b.system.agents) {
        out += "\nagent " + ag.name + "\n" + serialize_module(ag.module);
        const auto def = Repertoire::singletons(ag.module);
        const auto& m = ag.module;
        for (StateId q = 0; q < m.state_count(); ++q) {
            if (ag.repertoire.choices[q] == def.choices[q])
                continue;
            for (const auto& set : ag.repertoire.choices[q]) {
                std::vector<std::string> parts;
                for (const auto& t : set)
                    parts.push_back(m.state_names[t.to] + guard_text(m, {t.input}));
                out += "  choice " + m.state_names[q] + ": " + join(parts, "; ") + "\n";
            }
        }
        out += "end\n";
    }
    for (const auto& [name, a] : b.assumptions) {
        out += "\nassumption " + name + "\n" + serialize_module(a.module);
        std::vector<std::string> acc;
        for (StateId q = 0; q < a.module.state_count(); ++q)
            if (a.accepting[q])
                acc.push_back(a.module.state_names[q]);
        if (!acc.empty())
            out += "  accepting " + join(acc, " ") + "\n";
        out += "end\n";
    }
    return out;
}

Benchmark load_model(const std::string& spec)
{
    auto nums = [&](const std::string& s) {
        std::vector<int> v;
        for (const auto& p : split(s, "_")) {
            if (p.empty() || !std::all_of(p.begin(), p.end(), ::isdigit))
                return std::vector<int>{};
            v.push_back(std::stoi(p));
        }
        return v;
    };
    if (spec.rfind("tgc", 0) == 0) {
        auto v = nums(spec.substr(3));
        if (v.size() == 1)
            return gen_tgc(v[0]);
    }
    if (spec.rfind("robots", 0) == 0) {
        auto body = spec.substr(6);
        bool split_layout = false;
        if (body.size() > 6 && body.ends_with("_split")) {
            split_layout = true;
            body.resize(body.size() - 6);
        }
        auto v = nums(body);
        if (v.size() == 3)
            return gen_robots(v[0], v[1], v[2], split_layout);
    }
    return load_model_file(spec);
}

const Assumption* find_assumption(const Benchmark& b, const std::string& name)
{
    if (auto it = b.assumptions.find(name); it != b.assumptions.end())
        return &it->second;
    auto strip = [](std::string s) {
        std::erase(s, '_');
        return s;
    };
    for (const auto& [k, a] : b.assumptions)
        if (strip(k) == strip(name))
            return &a;
    return nullptr;
}

} // namespace agv
