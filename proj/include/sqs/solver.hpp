#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sqs/energy.hpp"
#include "sqs/fiber.hpp"

namespace sqs {

struct SolveOptions {
    int max_iters = 5000;
    double step_init = 0.1;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    double positivity_floor = 0.0;  // <= 0 means 1e-12 * spacing
    double residual_tol = 1e-8;     // discrete L2
    double nehari_tol = 1e-8;
    std::uint64_t seed = 0;
};

struct IterationRecord {
    double energy = 0.0;
    double residual_norm = 0.0;
};

struct SolveReport {
    GridFunction v;            // dual solution
    GridFunction u;            // g(v), primal solution
    EnergyBreakdown energy;
    double residual_norm = 0.0;
    double nehari_gap = 0.0;
    double t_final = 1.0;      // last fiber rescale factor
    int iters = 0;
    double epsilon_boundary = 0.0;  // min v / d
    bool converged = false;
    bool floor_active = false;
    std::vector<IterationRecord> trace;
};

/// Minimizes Phi by projected descent: a backtracking step along the
/// metric-preconditioned residual followed by a fiber rescale onto N2,
/// every iteration. Throws NoCompatibility (without iterating) when the
/// compatibility integral for the first eigenfunction diverges; returns
/// converged=false after max_iters.
SolveReport solve(const ProblemSpec& spec, const std::optional<GridFunction>& init,
                  const SolveOptions& opts = {});

/// min over interior nodes of v(x) / d(x, boundary).
double boundary_growth_check(const GridFunction& v);

struct UniquenessReport {
    std::vector<SolveReport> runs;
    double max_pairwise_h1 = 0.0;
    bool in_uniqueness_regime = false;  // (f)2, or (f)1 with b >= 0 and (D)
    bool uniqueness_pass = false;       // all converged and distances <= 1e3 * residual_tol
};

/// Runs solve from n_starts seeded random positive initializations and
/// reports the pairwise max H1 distance between the solutions.
UniquenessReport uniqueness_probe(const ProblemSpec& spec, int n_starts,
                                  const SolveOptions& opts = {});

struct SweepEntry {
    double lambda = 0.0;
    SolveReport report;
    double h1_dist_to_base = 0.0;  // ||v_lambda - v_0||_{H1}
    double min_slack_vs_base = 0.0;  // min nodewise v_lambda - v_0
};

struct SweepReport {
    std::vector<SweepEntry> entries;  // ascending lambda
    bool monotone_ordering = false;   // v_lambda >= v_0 - tol nodewise for lambda > 0
    bool energy_decreasing = false;   // Phi_lambda(v_lambda) strictly decreasing in lambda
    bool h1_convergence = false;      // distances decrease to < tol as lambda -> 0
    double ordering_tol = 1e-10;
    double h1_tol = 1e-3;
};

/// Solves the lambda-family in descending lambda order with warm starts;
/// the grid must contain lambda = 0 (the base problem).
SweepReport sweep_lambda(const ProblemSpec& spec, const std::vector<double>& lambdas,
                         const SolveOptions& opts = {});

}  // namespace sqs
