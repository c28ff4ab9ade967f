#pragma once

#include <vector>

#include "sqs/grid.hpp"
#include "sqs/problem.hpp"

namespace sqs {

struct EnergyBreakdown {
    double dirichlet = 0.0;  // (1/2)||v||^2
    double singular = 0.0;   // (gamma-1)^{-1} int h g(v)^{1-gamma}
    double nonlinear = 0.0;  // -int F(x,g(v)) (sublinear) or +(1/q) int b g(v)^q
    double total = 0.0;
    bool capped = false;     // a singular evaluation hit the overflow cap
};

/// Discrete dual energy, its Euler-Lagrange residual and the Nehari-gap
/// functional for a fixed spec. Samples h and b once at construction.
/// Pure const evaluation afterwards; safe to share between threads.
class EnergyModel {
  public:
    explicit EnergyModel(const ProblemSpec& spec);

    const ProblemSpec& spec() const { return spec_; }
    const GridFunction& h_field() const { return h_; }
    const GridFunction& b_field() const { return b_; }

    EnergyBreakdown energy(const GridFunction& v) const;

    /// Nodal strong-form residual (-Lap v) - h g(v)^{-gamma} g'(v)
    /// - f(x,g(v)) g'(v); identically zero at a discrete solution.
    GridFunction residual(const GridFunction& v) const;

    /// ||v||^2 - int f(x,g(v)) g'(v) v - int h g(v)^{-gamma} g'(v) v.
    /// Zero on N2; nonnegative on N1.
    double nehari_gap(const GridFunction& v) const;

    /// Fiber map phi_v(t) = Phi(t v) and its closed-form derivative.
    /// h1v, when nonnegative, is a precomputed h1_norm_sq(v).
    double phi(const GridFunction& v, double t, double h1v = -1.0) const;
    double phi_prime(const GridFunction& v, double t, double h1v = -1.0) const;

    /// Nonnegative nodal slope of the stiff right-hand-side terms,
    /// max(0, -d/dv [h g^{-gamma} g' + f g']); used to precondition descent.
    std::vector<double> stiffness_diagonal(const GridFunction& v) const;

    /// Strong-form residual of the primal problem at u = g(v), with the
    /// derivatives of u expanded through the discrete chain rule so that the
    /// quasilinear cancellation holds exactly on the grid.
    GridFunction primal_residual(const GridFunction& v) const;

  private:
    void check_positive(const GridFunction& v) const;

    ProblemSpec spec_;
    GridFunction h_;
    GridFunction b_;
};

EnergyBreakdown energy(const GridFunction& v, const ProblemSpec& spec);
GridFunction residual(const GridFunction& v, const ProblemSpec& spec);
double nehari_gap(const GridFunction& v, const ProblemSpec& spec);

}  // namespace sqs
