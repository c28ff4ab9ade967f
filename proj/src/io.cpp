#include "sqs/io.hpp"

#include <cstdio>
#include <fstream>

namespace sqs {

using nlohmann::json;

json to_json(const PropertyReport& rep) {
    json items = json::array();
    for (const auto& it : rep.items)
        items.push_back({{"name", it.name}, {"pass", it.pass}, {"worst_margin", it.worst_margin}});
    return {{"items", items},
            {"all_pass", rep.all_pass()},
            {"k0_estimate", rep.k0_estimate},
            {"worst_round_trip", rep.worst_round_trip},
            {"n_samples", rep.n_samples}};
}

json to_json(const ValidationReport& rep) {
    return {{"valid", rep.valid},
            {"violations", rep.violations},
            {"warnings", rep.warnings},
            {"condition_D_holds", rep.condition_D_holds}};
}

json to_json(const CompatReport& rep) {
    return {{"classification", rep.convergent() ? "convergent" : "divergent"},
            {"mesh_sizes", rep.mesh_sizes},
            {"estimates", rep.estimates},
            {"ratios", rep.ratios}};
}

json to_json(const DualityReport& rep) {
    return {{"plain", to_json(rep.plain)},
            {"derivative", to_json(rep.derivative)},
            {"transformed", to_json(rep.transformed)},
            {"agree", rep.agree()}};
}

json to_json(const EnergyBreakdown& e) {
    return {{"dirichlet", e.dirichlet},
            {"singular", e.singular},
            {"nonlinear", e.nonlinear},
            {"total", e.total},
            {"capped", e.capped}};
}

json to_json(const SolveReport& rep, bool include_trace) {
    json j = {{"converged", rep.converged},
              {"iters", rep.iters},
              {"energy", to_json(rep.energy)},
              {"residual_norm", rep.residual_norm},
              {"nehari_gap", rep.nehari_gap},
              {"t_final", rep.t_final},
              {"epsilon_boundary", rep.epsilon_boundary},
              {"floor_active", rep.floor_active}};
    if (include_trace) {
        json trace = json::array();
        for (const auto& it : rep.trace)
            trace.push_back({{"energy", it.energy}, {"residual_norm", it.residual_norm}});
        j["trace"] = trace;
    }
    return j;
}

json to_json(const UniquenessReport& rep) {
    json runs = json::array();
    for (const auto& r : rep.runs) runs.push_back(to_json(r, false));
    return {{"runs", runs},
            {"max_pairwise_h1", rep.max_pairwise_h1},
            {"in_uniqueness_regime", rep.in_uniqueness_regime},
            {"uniqueness_pass", rep.uniqueness_pass}};
}

json to_json(const SweepReport& rep) {
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"lambda", e.lambda},
                           {"report", to_json(e.report, false)},
                           {"h1_dist", e.h1_dist_to_base},
                           {"min_gap", e.min_slack_vs_base}});
    return {{"entries", entries},
            {"monotone_ordering", rep.monotone_ordering},
            {"energy_decreasing", rep.energy_decreasing},
            {"h1_convergence", rep.h1_convergence}};
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << j.dump(2) << '\n';
}

void write_sweep_csv(const SweepReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
    out << "lambda,energy,h1_dist,min_gap\n";
    char buf[160];
    for (const auto& e : rep.entries) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", e.lambda,
                      e.report.energy.total, e.h1_dist_to_base, e.min_slack_vs_base);
        out << buf;
    }
}

}  // namespace sqs
