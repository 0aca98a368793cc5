#pragma once

// Parametric benchmark families.

#include <map>
#include <string>

#include "agv/core.hpp"

namespace agv
{

struct Benchmark
{
    System system;
    std::map<std::string, Assumption> assumptions;
};

/// Train-gate controller with n trains (agents "train1".."trainN", then "ctrl").
/// Assumptions: "A0" (F={r}), "A1".."An" (F={g_i}), "Aall"; "A012" aliases "Aall" for n = 2.
Benchmark gen_tgc(int n);

/// Package-delivery robots: robots "r1".."rR" followed by depots "d1".."dR".
/// With `split`, the second half of the robots start at the far end of the line.
/// Assumptions: "D<i>" is depot i with every state accepting.
Benchmark gen_robots(int robots, int length, int energy, bool split = false);

/// "energy of robot i is positive" as a disjunction of equalities, e.g. "(en1=1 | en1=2)".
std::string robot_energy_positive(int robot, int energy);

} // namespace agv
