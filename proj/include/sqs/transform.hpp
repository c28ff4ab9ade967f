#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "sqs/errors.hpp"

namespace sqs {

struct PropertyItem {
    std::string name;
    bool pass = false;
    double worst_margin = 0.0;  // smallest slack observed; negative means violated
};

struct PropertyReport {
    std::array<PropertyItem, 12> items;
    double k0_estimate = 0.0;      // sup over samples of g(t)/sqrt(t)
    double worst_round_trip = 0.0; // max |G(g(t)) - t| / max(1,|t|)
    int n_samples = 0;

    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
};

/// Evaluator for the dual change of variables g defined by
/// g'(t) = (1 + 2 g(t)^2)^{-1/2}, g(0) = 0, extended oddly to t < 0.
///
/// g has no closed form but its inverse G does:
///   G(s) = (s/2) sqrt(1 + 2 s^2) + asinh(sqrt(2) s) / (2 sqrt(2)),
/// so g is computed by safeguarded Newton on G(s) = t.
///
/// Stateless after construction; safe to share between threads.
class TransformKernel {
  public:
    explicit TransformKernel(double newton_tol = 1e-13, int max_newton_iters = 60,
                             double series_switch = 1e-4);

    /// Antiderivative of sqrt(1 + 2 s^2); odd, strictly increasing.
    double G(double s) const;

    /// Inverse of G. |G(g(t)) - t| <= newton_tol * max(1, |t|).
    double g(double t) const;

    /// (1 + 2 g(t)^2)^{-1/2}, in (0, 1].
    double g_prime(double t) const;

    /// -2 g(t) (1 + 2 g(t)^2)^{-2}; negative for t > 0.
    double g_second(double t) const;

    /// Asymptotic constant sup_t g(t)/sqrt(t) = 2^{1/4}.
    static constexpr double k0() { return 1.1892071150027210667; }

    /// Constant of the lower bounds g(t) >= C t on (0,1] and g(t) >= C sqrt(t)
    /// beyond; equals g(1).
    double lower_bound_constant() const { return g(1.0); }

    double newton_tol() const { return newton_tol_; }
    int max_newton_iters() const { return max_newton_iters_; }
    double series_switch() const { return series_switch_; }

    /// Samples t log-uniformly on (1e-8, t_max) plus sign reflections and
    /// checks the twelve analytic properties of g numerically. Failures are
    /// data in the report, not errors.
    PropertyReport verify_properties(int n_samples, double t_max, std::uint64_t seed) const;

  private:
    double invert_positive(double t) const;

    double newton_tol_;
    int max_newton_iters_;
    double series_switch_;
};

/// Shared default-configured kernel.
const TransformKernel& default_kernel();

}  // namespace sqs
