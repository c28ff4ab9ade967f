#include "sqs/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sqs/errors.hpp"

namespace sqs {

double phi(const GridFunction& v, double t, const ProblemSpec& spec) {
    return EnergyModel(spec).phi(v, t);
}

double phi_prime(const GridFunction& v, double t, const ProblemSpec& spec) {
    return EnergyModel(spec).phi_prime(v, t);
}

namespace {

// False position with the Illinois cut on phi'; fa < 0 < fb on entry.
double refine_minimizer(const EnergyModel& model, const GridFunction& v, double h1v, double a,
                        double fa, double b, double fb, double tol) {
    double t = 0.5 * (a + b);
    for (int iter = 0; iter < 200; ++iter) {
        t = (a * fb - b * fa) / (fb - fa);
        if (!(t > a && t < b)) t = 0.5 * (a + b);
        const double ft = model.phi_prime(v, t, h1v);
        if (std::abs(ft) <= tol || b - a <= 1e-15 * t) return t;
        if (ft < 0.0) {
            a = t;
            fa = ft;
            fb *= 0.5;
        } else {
            b = t;
            fb = ft;
            fa *= 0.5;
        }
    }
    return t;
}

double golden_section(const EnergyModel& model, const GridFunction& v, double h1v, double a,
                      double b) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = model.phi(v, x1, h1v), f2 = model.phi(v, x2, h1v);
    for (int iter = 0; iter < 200 && b - a > 1e-13 * std::max(1.0, a); ++iter) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = model.phi(v, x1, h1v);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = model.phi(v, x2, h1v);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

FiberProfile project_to_nehari(const EnergyModel& model, const GridFunction& v,
                               const FiberOptions& opts) {
    const double h1v = h1_norm_sq(v);
    const double tol = opts.derivative_tol_scale * std::max(1.0, h1v);

    FiberProfile prof;
    prof.t_samples.resize(static_cast<std::size_t>(opts.scan_points));
    const double log_lo = std::log(opts.t_lo), log_hi = std::log(opts.t_hi);
    for (int i = 0; i < opts.scan_points; ++i)
        prof.t_samples[static_cast<std::size_t>(i)] =
            std::exp(log_lo + (log_hi - log_lo) * i / (opts.scan_points - 1));

    prof.phi_values.reserve(prof.t_samples.size());
    prof.phi_prime_values.reserve(prof.t_samples.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < prof.t_samples.size(); ++i) {
        prof.phi_values.push_back(model.phi(v, prof.t_samples[i], h1v));
        prof.phi_prime_values.push_back(model.phi_prime(v, prof.t_samples[i], h1v));
        if (prof.phi_values[i] < prof.phi_values[best]) best = i;  // ties toward smaller t
    }
    if (best == 0 || best + 1 == prof.t_samples.size())
        throw NoInteriorMinimum("project_to_nehari: scan minimum on the grid boundary at t=" +
                                std::to_string(prof.t_samples[best]));

    const double ta = prof.t_samples[best - 1], tb = prof.t_samples[best + 1];
    prof.bracket = {ta, tb};

    // pick the half-bracket with a derivative sign change
    double a, fa, b, fb;
    if (prof.phi_prime_values[best] > 0.0) {
        a = ta;
        fa = prof.phi_prime_values[best - 1];
        b = prof.t_samples[best];
        fb = prof.phi_prime_values[best];
    } else {
        a = prof.t_samples[best];
        fa = prof.phi_prime_values[best];
        b = tb;
        fb = prof.phi_prime_values[best + 1];
    }
    if (fa < 0.0 && fb > 0.0) {
        prof.t_min = refine_minimizer(model, v, h1v, a, fa, b, fb, tol);
    } else {
        // no clean sign change across the sampled triple; minimize phi directly
        prof.t_min = golden_section(model, v, h1v, ta, tb);
    }
    prof.phi_min = std::min(model.phi(v, prof.t_min, h1v), prof.phi_values[best]);
    prof.shape = classify_shape(prof);
    return prof;
}

FiberProfile project_to_nehari(const GridFunction& v, const ProblemSpec& spec,
                               const FiberOptions& opts) {
    return project_to_nehari(EnergyModel(spec), v, opts);
}

FiberShape classify_shape(const FiberProfile& profile) {
    int changes = 0;
    double prev = 0.0;
    for (double d : profile.phi_prime_values) {
        if (d == 0.0) continue;
        if (prev != 0.0 && std::signbit(d) != std::signbit(prev)) ++changes;
        prev = d;
    }
    return changes >= 3 ? FiberShape::MultiCritical : FiberShape::SingleMin;
}

void write_fiber_csv(const FiberProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_fiber_csv: cannot open " + path);
    out << "t,phi,phi_prime\n";
    char buf[128];
    for (std::size_t i = 0; i < profile.t_samples.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", profile.t_samples[i],
                      profile.phi_values[i], profile.phi_prime_values[i]);
        out << buf;
    }
}

}  // namespace sqs
