#pragma once

#include <string>
#include <vector>

#include "sqs/energy.hpp"

namespace sqs {

enum class FiberShape { SingleMin, MultiCritical };

struct FiberProfile {
    std::vector<double> t_samples;         // log-spaced scan grid
    std::vector<double> phi_values;
    std::vector<double> phi_prime_values;
    double t_min = 1.0;                    // located global minimizer
    double phi_min = 0.0;
    FiberShape shape = FiberShape::SingleMin;
    std::pair<double, double> bracket{0.0, 0.0};
};

struct FiberOptions {
    double t_lo = 1e-6;
    double t_hi = 1e6;
    int scan_points = 241;
    double derivative_tol_scale = 1e-10;  // |phi'| <= scale * max(1, ||v||^2)
};

double phi(const GridFunction& v, double t, const ProblemSpec& spec);
double phi_prime(const GridFunction& v, double t, const ProblemSpec& spec);

/// Scans the fiber map on a log grid, brackets the global minimum (ties
/// broken toward smaller t) and refines the minimizer until
/// |phi'(t_min)| <= derivative_tol_scale * max(1, ||v||^2).
/// Throws NoInteriorMinimum if the scan minimum sits on the grid boundary.
FiberProfile project_to_nehari(const GridFunction& v, const ProblemSpec& spec,
                               const FiberOptions& opts = {});
FiberProfile project_to_nehari(const EnergyModel& model, const GridFunction& v,
                               const FiberOptions& opts = {});

/// Counts sign changes of phi' over the scan grid: one change is the
/// single-well shape, three or more the multi-critical one.
FiberShape classify_shape(const FiberProfile& profile);

/// CSV export `t,phi,phi_prime`.
void write_fiber_csv(const FiberProfile& profile, const std::string& path);

}  // namespace sqs
