#include "agv/generators.hpp"

#include <algorithm>

namespace agv
{

namespace
{

std::string idx(const std::string& base, int i) { return base + std::to_string(i); }

Assumption as_assumption(const std::string& name, const Module& m, std::vector<bool> acc)
{
    return Assumption{name, m, std::move(acc)};
}

} // namespace

Benchmark gen_tgc(int n)
{
    if (n < 1)
        throw ModelError("gen_tgc: need at least one train");
    const int domain = std::max(n, 2) + 1;
    Benchmark b;
    b.system.domain = domain;

    for (int i = 1; i <= n; ++i) {
        const auto x = idx("x", i);
        ModuleBuilder mb(domain, {x}, {"s"});
        auto w = mb.add_state(idx("w", i), {{x, 0}});
        auto t = mb.add_state(idx("t", i), {{x, 1}});
        auto a = mb.add_state(idx("a", i), {{x, 2}});
        mb.set_initial(w);
        mb.add_transition(w, t, {{"s", {i}}});
        mb.add_transition(t, a, {{"s", {i}}});
        mb.add_transition(a, w);
        std::vector<Value> others;
        for (int j = 0; j < domain; ++j)
            if (j != i)
                others.push_back(j);
        mb.add_transition(w, w, {{"s", others}});
        mb.add_transition(t, t, {{"s", others}});
        Module m = mb.build(false);
        b.system.agents.push_back({idx("train", i), m, Repertoire::singletons(m)});
    }

    std::vector<std::string> xs;
    for (int i = 1; i <= n; ++i)
        xs.push_back(idx("x", i));
    ModuleBuilder cb(domain, {"s"}, xs);
    auto r = cb.add_state("r", {{"s", 0}});
    std::vector<StateId> g;
    for (int i = 1; i <= n; ++i)
        g.push_back(cb.add_state(idx("g", i), {{"s", i}}));
    cb.set_initial(r);
    for (int i = 1; i <= n; ++i) {
        cb.add_transition(r, g[i - 1], {{idx("x", i), {0}}});
        cb.add_transition(g[i - 1], r, {{idx("x", i), {2}}});
    }
    Module ctrl = cb.build(true);
    b.system.agents.push_back({"ctrl", ctrl, Repertoire::singletons(ctrl)});

    const auto k = ctrl.state_count();
    std::vector<bool> acc0(k, false);
    acc0[r] = true;
    b.assumptions["A0"] = as_assumption("A0", ctrl, acc0);
    for (int i = 1; i <= n; ++i) {
        std::vector<bool> acc(k, false);
        acc[g[i - 1]] = true;
        b.assumptions[idx("A", i)] = as_assumption(idx("A", i), ctrl, acc);
    }
    b.assumptions["Aall"] = as_assumption("Aall", ctrl, std::vector<bool>(k, true));
    if (n == 2)
        b.assumptions["A012"] = as_assumption("A012", ctrl, std::vector<bool>(k, true));
    return b;
}

Benchmark gen_robots(int robots, int length, int energy, bool split)
{
    if (robots < 1 || length < 1 || energy < 0)
        throw ModelError("gen_robots: invalid configuration");
    const int domain = std::max({length + 1, energy + 1, 2});
    Benchmark b;
    b.system.domain = domain;

    for (int i = 1; i <= robots; ++i) {
        const auto pos = idx("pos", i), en = idx("en", i), car = idx("car", i), del = idx("del", i);
        ModuleBuilder mb(domain, {pos, en, car}, {del});
        auto id = [&](int p, int e, int c) {
            return static_cast<StateId>(((p - 1) * (energy + 1) + e) * 2 + c);
        };
        for (int p = 1; p <= length; ++p)
            for (int e = 0; e <= energy; ++e)
                for (int c = 0; c <= 1; ++c)
                    mb.add_state("p" + std::to_string(p) + "e" + std::to_string(e) + "c" + std::to_string(c),
                                 {{pos, p}, {en, e}, {car, c}});
        const bool far = split && i > robots / 2;
        mb.set_initial(id(far ? length : 1, energy, 0));
        for (int p = 1; p <= length; ++p)
            for (int e = 0; e <= energy; ++e) {
                if (p == 1)
                    mb.add_transition(id(p, e, 0), id(p, e, 1), {{del, {0}}});
                if (p == length)
                    mb.add_transition(id(p, e, 1), id(p, e, 0), {{del, {1}}});
                if (e > 0 && p < length)
                    mb.add_transition(id(p, e, 1), id(p + 1, e - 1, 1));
                if (e > 0 && p > 1)
                    mb.add_transition(id(p, e, 0), id(p - 1, e - 1, 0));
            }
        Module m = mb.build(true);
        b.system.agents.push_back({idx("r", i), m, Repertoire::singletons(m)});
    }

    for (int i = 1; i <= robots; ++i) {
        const auto pos = idx("pos", i), car = idx("car", i), del = idx("del", i);
        ModuleBuilder db(domain, {del}, {car, pos});
        auto no = db.add_state("n", {{del, 0}});
        auto yes = db.add_state("y", {{del, 1}});
        db.set_initial(no);
        db.add_transition(no, yes, {{pos, {length}}, {car, {1}}});
        Module m = db.build(true);
        b.system.agents.push_back({idx("d", i), m, Repertoire::singletons(m)});
        b.assumptions[idx("D", i)] = as_assumption(idx("D", i), m, std::vector<bool>(m.state_count(), true));
    }
    return b;
}

std::string robot_energy_positive(int robot, int energy)
{
    if (energy < 1)
        return "false";
    std::string out = "(";
    for (int e = 1; e <= energy; ++e)
        out += (e > 1 ? " | " : "") + idx("en", robot) + "=" + std::to_string(e);
    return out + ")";
}

} // namespace agv
