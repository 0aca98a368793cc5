#pragma once

// Machine-readable and human-readable reports.

#include <json.hpp>
#include <string>

#include "agv/guarantee.hpp"
#include "agv/rules.hpp"
#include "agv/strategy.hpp"

namespace agv
{

nlohmann::json to_json(const LassoWord& w, const Alphabet& a);
nlohmann::json to_json(const JointStrategy& s, const System& sys);
nlohmann::json to_json(const VerificationResult& r, const System& sys);
nlohmann::json to_json(const GuaranteeResult& r, const Module& m);
nlohmann::json to_json(const AgvReport& r, const System& sys);

std::string describe(const VerificationResult& r, const System& sys);
std::string describe(const AgvReport& r, const System& sys);

} // namespace agv
