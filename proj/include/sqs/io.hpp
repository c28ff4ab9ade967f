#pragma once

#include <string>

#include "json.hpp"
#include "sqs/problem.hpp"
#include "sqs/solver.hpp"
#include "sqs/transform.hpp"

namespace sqs {

nlohmann::json to_json(const PropertyReport& rep);
nlohmann::json to_json(const ValidationReport& rep);
nlohmann::json to_json(const CompatReport& rep);
nlohmann::json to_json(const DualityReport& rep);
nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const SolveReport& rep, bool include_trace = true);
nlohmann::json to_json(const UniquenessReport& rep);
nlohmann::json to_json(const SweepReport& rep);

void write_json(const nlohmann::json& j, const std::string& path);

/// CSV `lambda,energy,h1_dist,min_gap`, ascending lambda.
void write_sweep_csv(const SweepReport& rep, const std::string& path);

}  // namespace sqs
