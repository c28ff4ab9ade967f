#include "sqs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sqs/errors.hpp"
#include "sqs/transform.hpp"

namespace sqs {

namespace {

// Fiber rescale with a cheap local scan around the previous factor,
// widening to the full range when the local minimum sits on its edge.
FiberProfile project_near_unity(const EnergyModel& model, const GridFunction& v) {
    FiberOptions local;
    local.t_lo = 0.25;
    local.t_hi = 4.0;
    local.scan_points = 33;
    try {
        return project_to_nehari(model, v, local);
    } catch (const NoInteriorMinimum&) {
        return project_to_nehari(model, v, FiberOptions{});
    }
}

double dot_weighted(const GridFunction& a, const GridFunction& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
    return acc * volume_weight(a.mesh);
}

}  // namespace

SolveReport solve(const ProblemSpec& spec, const std::optional<GridFunction>& init,
                  const SolveOptions& opts) {
    ensure_valid(spec);
    const GridFunction phi1 = first_eigenfunction(spec.mesh).first;
    if (!compat_integral(spec, phi1, 3).convergent())
        throw NoCompatibility("solve: compatibility integral diverges for this (h, gamma)");

    const EnergyModel model(spec);
    const double floor =
        opts.positivity_floor > 0.0 ? opts.positivity_floor : 1e-12 * spec.mesh.spacing;

    GridFunction v = init ? *init : phi1;
    for (double& x : v.values) x = std::max(x, floor);

    SolveReport rep;
    {
        const FiberProfile prof = project_to_nehari(model, v);
        for (double& x : v.values) x *= prof.t_min;
        rep.t_final = prof.t_min;
    }

    double step = opts.step_init;
    int stagnations = 0;
    for (int k = 0; k < opts.max_iters; ++k) {
        const GridFunction r = model.residual(v);
        const double rnorm = std::sqrt(l2_norm_sq(r));
        const double gap = model.nehari_gap(v);
        const EnergyBreakdown e = model.energy(v);
        rep.trace.push_back({e.total, rnorm});
        rep.iters = k;
        rep.floor_active = v.min() <= floor;

        if (rnorm <= opts.residual_tol && std::abs(gap) <= opts.nehari_tol && !rep.floor_active &&
            !e.capped) {
            rep.converged = true;
            break;
        }

        const GridFunction dir = shifted_poisson_solve(r, model.stiffness_diagonal(v), 1e-10);

        // Terminal phase: near the solution the energy decrease of a step
        // falls below rounding, so Armijo cannot certify it. Accept the unit
        // preconditioned step outright whenever it halves the residual
        // without raising the energy beyond rounding noise.
        bool accepted = false;
        GridFunction trial(spec.mesh);
        {
            for (std::size_t i = 0; i < v.values.size(); ++i)
                trial.values[i] = std::max(v.values[i] - dir.values[i], floor);
            const double rtrial = std::sqrt(l2_norm_sq(model.residual(trial)));
            if (rtrial <= 0.5 * rnorm &&
                model.energy(trial).total <= e.total + 1e-12 * std::max(1.0, std::abs(e.total))) {
                accepted = true;
                step = 1.0;
            }
        }
        if (!accepted) {
            const double slope = dot_weighted(r, dir);  // > 0, SPD metric
            double alpha = step;
            int backtracks = 0;
            for (; backtracks < 60; ++backtracks) {
                for (std::size_t i = 0; i < v.values.size(); ++i)
                    trial.values[i] = std::max(v.values[i] - alpha * dir.values[i], floor);
                if (model.energy(trial).total <= e.total - opts.armijo_c * alpha * slope) {
                    accepted = true;
                    break;
                }
                alpha *= opts.backtrack;
            }
            if (!accepted) {
                if (++stagnations >= 3) break;  // no descent along the metric gradient
                step = std::max(step * opts.backtrack, 1e-8);
                continue;
            }
            step = backtracks == 0 ? std::min(alpha * 2.0, 1.0) : alpha;
        }
        stagnations = 0;
        v = trial;

        const FiberProfile prof = project_near_unity(model, v);
        for (double& x : v.values) x *= prof.t_min;
        rep.t_final = prof.t_min;
    }

    rep.v = v;
    rep.u = v;
    const TransformKernel& kernel = default_kernel();
    for (double& x : rep.u.values) x = kernel.g(x);
    rep.energy = model.energy(v);
    rep.residual_norm = std::sqrt(l2_norm_sq(model.residual(v)));
    rep.nehari_gap = model.nehari_gap(v);
    rep.floor_active = v.min() <= floor;
    rep.epsilon_boundary = boundary_growth_check(v);
    return rep;
}

double boundary_growth_check(const GridFunction& v) {
    const GridFunction d = boundary_distance(v.mesh);
    double eps = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.values.size(); ++i)
        eps = std::min(eps, v.values[i] / d.values[i]);
    return eps;
}

UniquenessReport uniqueness_probe(const ProblemSpec& spec, int n_starts,
                                  const SolveOptions& opts) {
    ensure_valid(spec);
    const ValidationReport val = validate(spec);
    UniquenessReport rep;
    rep.in_uniqueness_regime =
        spec.f.tag == NonlinearityCase::Tag::CriticalType ||
        (spec.f.b.min_value() >= 0.0 && val.condition_D_holds);

    const GridFunction phi1 = first_eigenfunction(spec.mesh).first;
    for (int s = 0; s < n_starts; ++s) {
        std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(s));
        std::uniform_real_distribution<double> unif(0.2, 1.2);
        GridFunction v0 = phi1;
        for (double& x : v0.values) x *= unif(rng);
        rep.runs.push_back(solve(spec, v0, opts));
    }

    bool all_converged = true;
    for (const auto& run : rep.runs) all_converged = all_converged && run.converged;
    for (std::size_t i = 0; i < rep.runs.size(); ++i)
        for (std::size_t j = i + 1; j < rep.runs.size(); ++j) {
            GridFunction diff = rep.runs[i].v;
            for (std::size_t nidx = 0; nidx < diff.values.size(); ++nidx)
                diff.values[nidx] -= rep.runs[j].v.values[nidx];
            rep.max_pairwise_h1 = std::max(rep.max_pairwise_h1, std::sqrt(h1_norm_sq(diff)));
        }
    rep.uniqueness_pass = all_converged && rep.max_pairwise_h1 <= 1e3 * opts.residual_tol;
    return rep;
}

SweepReport sweep_lambda(const ProblemSpec& spec, const std::vector<double>& lambdas,
                         const SolveOptions& opts) {
    if (spec.f.tag != NonlinearityCase::Tag::Sublinear)
        throw InvalidSpec("sweep_lambda: requires the sublinear case");
    if (spec.f.b.min_value() < 0.0)
        throw InvalidSpec("sweep_lambda: requires b >= 0");
    std::vector<double> grid = lambdas;
    std::sort(grid.begin(), grid.end(), std::greater<>());
    if (grid.empty() || grid.back() != 0.0)
        throw InvalidSpec("sweep_lambda: the lambda grid must include 0");
    for (double l : grid)
        if (l < 0.0) throw InvalidSpec("sweep_lambda: lambdas must be >= 0");

    SweepReport rep;
    std::optional<GridFunction> warm;
    std::vector<SweepEntry> entries;  // descending order of solve
    for (double lam : grid) {
        ProblemSpec s = spec;
        s.lambda = lam;
        SweepEntry entry;
        entry.lambda = lam;
        entry.report = solve(s, warm, opts);
        warm = entry.report.v;
        entries.push_back(std::move(entry));
    }

    const GridFunction& base = entries.back().report.v;  // lambda = 0
    for (auto& entry : entries) {
        GridFunction diff = entry.report.v;
        double min_slack = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < diff.values.size(); ++i) {
            diff.values[i] -= base.values[i];
            min_slack = std::min(min_slack, diff.values[i]);
        }
        entry.h1_dist_to_base = std::sqrt(h1_norm_sq(diff));
        entry.min_slack_vs_base = min_slack;
    }

    std::reverse(entries.begin(), entries.end());  // ascending lambda
    rep.entries = std::move(entries);

    rep.monotone_ordering = true;
    rep.energy_decreasing = true;
    rep.h1_convergence = true;
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const SweepEntry& e = rep.entries[i];
        if (e.lambda > 0.0 && e.min_slack_vs_base < -rep.ordering_tol) rep.monotone_ordering = false;
        if (i > 0) {
            if (!(rep.entries[i].report.energy.total <
                  rep.entries[i - 1].report.energy.total + 1e-12))
                rep.energy_decreasing = false;
            if (rep.entries[i - 1].lambda > 0.0 &&
                rep.entries[i - 1].h1_dist_to_base > rep.entries[i].h1_dist_to_base + 1e-12)
                rep.h1_convergence = false;
        }
    }
    if (rep.entries.size() > 1 && rep.entries[1].h1_dist_to_base >= rep.h1_tol)
        rep.h1_convergence = false;
    return rep;
}

}  // namespace sqs
