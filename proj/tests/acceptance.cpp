// Acceptance gate: ten end-to-end criteria, one pass/fail line each.
// Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sqs/io.hpp"

using namespace sqs;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void criterion(int number, const std::string& title, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
        body();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty()) {
        std::printf("[criterion %2d] PASS (%6.1f s) %s\n", number, secs, title.c_str());
    } else {
        ++g_failures;
        std::printf("[criterion %2d] FAIL (%6.1f s) %s\n               reason: %s\n", number, secs,
                    title.c_str(), failure.c_str());
    }
    std::fflush(stdout);
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

ProblemSpec power_spec(double gamma, double sigma, int n, int dim = 1) {
    ProblemSpec spec;
    spec.gamma = gamma;
    spec.h = HSpec::power_of_distance(1.0, sigma);
    spec.f = NonlinearityCase::sublinear(0.5, BSpec::constant(1.0));
    spec.mesh = Mesh(dim, n);
    return spec;
}

ProblemSpec manufactured_spec(double gamma, int n) {
    const Mesh mesh(1, n);
    const TransformKernel& k = default_kernel();
    GridFunction h(mesh);
    for (std::size_t i = 0; i < h.values.size(); ++i) {
        const double s = std::sin(kPi * mesh.coords(i)[0]);
        h.values[i] = kPi * kPi * s * std::pow(k.g(s), gamma) / k.g_prime(s);
    }
    ProblemSpec spec;
    spec.gamma = gamma;
    spec.h = HSpec::tabulated(std::move(h));
    spec.f = NonlinearityCase::sublinear(0.5, BSpec::constant(0.0));
    spec.mesh = mesh;
    return spec;
}

double dot_weighted(const GridFunction& a, const GridFunction& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
    return acc * volume_weight(a.mesh);
}

// converged runs from criteria 5-8, re-checked by criteria 9 and 10
std::vector<std::pair<ProblemSpec, SolveReport>> g_runs;

void check_transform_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const PropertyReport rep = default_kernel().verify_properties(10000, 1e6, 42);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& item : rep.items) require(item.pass, "property failed: " + item.name);
    require(rep.worst_round_trip <= 1e-12, "round trip above 1e-12");
    require(std::abs(rep.k0_estimate - TransformKernel::k0()) <= 1e-3, "K0 estimate off");
    require(secs < 5.0, "property suite slower than 5 s");

#ifdef SQS_CLI_PATH
    const std::string cmd = std::string(SQS_CLI_PATH) +
                            " verify-transform --samples 10000 --seed 42"
                            " --out /tmp/sqs_acceptance_c1 > /dev/null";
    const int rc = std::system(cmd.c_str());
    require(rc == 0, "CLI verify-transform exited nonzero");
#endif
}

void check_gradient_consistency() {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<ProblemSpec> specs;
    specs.push_back(power_spec(2.0, 1.5, 255));
    specs.push_back(power_spec(3.0, 2.5, 255));
    {
        ProblemSpec s = power_spec(2.0, 1.5, 255);
        s.f = NonlinearityCase::critical_type(4.0, BSpec::constant(1.0));
        specs.push_back(s);
    }
    for (const ProblemSpec& spec : specs) {
        const EnergyModel model(spec);
        GridFunction v = first_eigenfunction(spec.mesh).first;
        for (double& x : v.values) x = 0.5 + 0.5 * x;
        const GridFunction r = model.residual(v);
        for (int k = 0; k < 20; ++k) {
            GridFunction w(spec.mesh);
            for (double& x : w.values) x = unif(rng);
            const double eps = 1e-6;
            GridFunction vp = v, vm = v;
            for (std::size_t i = 0; i < v.values.size(); ++i) {
                vp.values[i] += eps * w.values[i];
                vm.values[i] -= eps * w.values[i];
            }
            const double fd = (model.energy(vp).total - model.energy(vm).total) / (2.0 * eps);
            const double exact = dot_weighted(r, w);
            require(std::abs(fd - exact) <= 1e-5 * std::max(std::abs(exact), std::abs(fd)),
                    "gradient/energy mismatch at direction " + std::to_string(k));
        }
    }
}

void check_duality_grid() {
    // 5 doublings from 2047 end at n = 32767 = 2^15 - 1
    for (double gamma : {1.5, 2.0, 3.0, 4.0}) {
        for (double dsig : {-0.5, -0.1, 0.1, 0.5}) {
            const ProblemSpec spec = power_spec(gamma, gamma - 2.0 + dsig, 2047);
            const GridFunction phi1 = first_eigenfunction(spec.mesh).first;
            const DualityReport rep = classify_duality(spec, phi1, 5);
            std::ostringstream tag;
            tag << "gamma=" << gamma << " sigma=" << spec.h.sigma;
            require(rep.agree(), "duality classifications disagree at " + tag.str());
            require(rep.plain.convergent() == (dsig > 0.0),
                    "verdict contradicts sigma > gamma - 2 at " + tag.str());
        }
    }
}

void check_fiber_analysis() {
    std::vector<ProblemSpec> specs;
    specs.push_back(power_spec(2.0, 1.5, 511));
    specs.push_back(power_spec(1.5, 0.75, 511));
    {
        ProblemSpec s = power_spec(2.0, 1.5, 511);
        s.f = NonlinearityCase::critical_type(4.0, BSpec::constant(1.0));
        specs.push_back(s);
    }
    for (const ProblemSpec& spec : specs) {
        ensure_valid(spec);
        const EnergyModel model(spec);
        const GridFunction v = first_eigenfunction(spec.mesh).first;
        const double h1v = h1_norm_sq(v);
        const FiberProfile prof = project_to_nehari(model, v);

        for (std::size_t i = 0; i < prof.t_samples.size(); i += 10) {
            const double t = prof.t_samples[i];
            const double dt = 1e-6 * t;
            const double fd = (model.phi(v, t + dt, h1v) - model.phi(v, t - dt, h1v)) / (2.0 * dt);
            const double exact = prof.phi_prime_values[i];
            require(std::abs(fd - exact) <= 1e-6 * std::max(std::abs(exact), std::abs(fd)),
                    "phi' vs FD mismatch at t=" + std::to_string(t));
        }

        GridFunction tv = v;
        for (double& x : tv.values) x *= prof.t_min;
        require(std::abs(model.nehari_gap(tv)) <= 1e-8 * std::max(1.0, h1v),
                "projection misses the Nehari set");

        for (double c : {0.5, 2.0, 10.0}) {
            GridFunction cv = v;
            for (double& x : cv.values) x *= c;
            const double tc = project_to_nehari(model, cv).t_min;
            require(std::abs(tc * c - prof.t_min) <= 1e-6 * prof.t_min,
                    "scaling equivariance fails at c=" + std::to_string(c));
        }
        if (spec.f.tag == NonlinearityCase::Tag::CriticalType)
            require(prof.shape == FiberShape::SingleMin, "critical fiber map not single-well");
    }
}

void check_manufactured_convergence() {
    for (double gamma : {1.5, 2.0, 3.0}) {
        std::vector<double> errs;
        std::vector<double> hs;
        for (int n : {255, 511, 1023, 2047}) {
            const ProblemSpec spec = manufactured_spec(gamma, n);
            const SolveReport rep = solve(spec, std::nullopt, {});
            require(rep.converged, "no convergence at gamma=" + std::to_string(gamma) +
                                       " n=" + std::to_string(n));
            require(std::abs(rep.nehari_gap) <= 1e-8, "nehari gap above 1e-8");
            require(!rep.floor_active, "positivity floor active at convergence");
            GridFunction diff = rep.v;
            for (std::size_t i = 0; i < diff.values.size(); ++i)
                diff.values[i] -= std::sin(kPi * diff.mesh.coords(i)[0]);
            errs.push_back(std::sqrt(l2_norm_sq(diff)));
            hs.push_back(spec.mesh.spacing);
            g_runs.emplace_back(spec, rep);
        }
        // least-squares slope of log err vs log h
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < errs.size(); ++i) {
            const double x = std::log(hs[i]), y = std::log(errs[i]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double m = static_cast<double>(errs.size());
        const double order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        require(order >= 1.8, "observed L2 order " + std::to_string(order) +
                                  " < 1.8 at gamma=" + std::to_string(gamma));
    }
}

void check_existence_boundary() {
    const ProblemSpec good = power_spec(3.0, 1.5, 511);
    const SolveReport rep = solve(good, std::nullopt, {});
    require(rep.converged, "gamma=3, h=d^1.5 did not converge");
    g_runs.emplace_back(good, rep);

    bool threw = false;
    try {
        solve(power_spec(3.0, 0.5, 511), std::nullopt, {});
    } catch (const NoCompatibility&) {
        threw = true;
    }
    require(threw, "gamma=3, h=d^0.5 did not raise NoCompatibility");
}

void check_uniqueness() {
    std::vector<ProblemSpec> specs;
    {
        ProblemSpec cube = power_spec(2.0, 1.5, 15, 3);
        cube.f = NonlinearityCase::critical_type(12.0, BSpec::constant(1.0));
        specs.push_back(cube);
    }
    {
        ProblemSpec line = power_spec(2.0, 1.5, 1023);
        line.f = NonlinearityCase::critical_type(4.0, BSpec::constant(1.0));
        specs.push_back(line);
    }
    specs.push_back(power_spec(2.0, 1.5, 1023));  // (f)1, b >= 0, (D) holds
    for (std::size_t s = 0; s < specs.size(); ++s) {
        const UniquenessReport rep = uniqueness_probe(specs[s], 5, {});
        require(rep.in_uniqueness_regime, "spec " + std::to_string(s) + " outside regime");
        for (const auto& run : rep.runs)
            require(run.converged, "a start failed to converge on spec " + std::to_string(s));
        require(rep.max_pairwise_h1 <= 1e-5,
                "pairwise H1 spread " + std::to_string(rep.max_pairwise_h1) + " above 1e-5");
        for (const auto& run : rep.runs) g_runs.emplace_back(specs[s], run);
    }
}

void check_lambda_sweep() {
    const ProblemSpec spec = power_spec(2.0, 1.5, 1023);
    const SweepReport rep = sweep_lambda(spec, {0.0, 0.01, 0.1, 1.0, 10.0}, {});
    require(rep.entries.size() == 5, "wrong entry count");
    for (const auto& e : rep.entries) require(e.report.converged, "a sweep point did not converge");
    require(rep.monotone_ordering, "nodewise ordering v_lambda >= v_0 fails");
    require(rep.energy_decreasing, "energy not strictly decreasing in lambda");
    require(rep.entries[1].h1_dist_to_base < 1e-3, "H1 distance at lambda=0.01 above 1e-3");
    require(rep.h1_convergence, "H1 distances not decreasing as lambda -> 0");
    for (const auto& e : rep.entries) {
        ProblemSpec s = spec;
        s.lambda = e.lambda;
        g_runs.emplace_back(s, e.report);
    }
}

void check_primal_dual() {
    require(!g_runs.empty(), "no converged runs collected");
    for (const auto& [spec, rep] : g_runs) {
        const EnergyModel model(spec);
        const double norm = std::sqrt(l2_norm_sq(model.primal_residual(rep.v)));
        const double bound = 10.0 * 1e-8 * (1.0 + std::sqrt(h1_norm_sq(rep.v)));
        require(norm <= bound, "primal residual " + std::to_string(norm) + " above bound " +
                                   std::to_string(bound));
    }
}

void check_boundary_growth() {
    std::vector<double> eps;
    for (int n : {255, 511, 1023}) {
        const SolveReport rep = solve(power_spec(2.0, 1.5, n), std::nullopt, {});
        require(rep.converged, "no convergence at n=" + std::to_string(n));
        require(rep.epsilon_boundary > 0.0, "epsilon-hat not positive");
        eps.push_back(rep.epsilon_boundary);
    }
    for (std::size_t i = 1; i < eps.size(); ++i)
        require(std::abs(eps[i] - eps[i - 1]) < 0.2 * eps[i - 1],
                "epsilon-hat varies by more than 20% across a doubling");
}

}  // namespace

int main() {
    criterion(1, "transform property suite, round trip, K0 (runtime < 5 s)",
              check_transform_suite);
    criterion(2, "residual matches finite differences of the energy", check_gradient_consistency);
    criterion(3, "duality chain classifications on the 16-point (gamma, sigma) grid",
              check_duality_grid);
    criterion(4, "fiber map: derivative, projection, equivariance, shape", check_fiber_analysis);
    criterion(5, "manufactured-solution L2 convergence order >= 1.8", check_manufactured_convergence);
    criterion(6, "existence/non-existence dichotomy at gamma = 3", check_existence_boundary);
    criterion(7, "five-start uniqueness probes agree within 1e-5 in H1", check_uniqueness);
    criterion(8, "lambda sweep: ordering, energy decrease, H1 convergence", check_lambda_sweep);
    criterion(9, "primal residual small at u = g(v) on all converged runs", check_primal_dual);
    criterion(10, "boundary growth rate stable across mesh doublings", check_boundary_growth);

    if (g_failures == 0)
        std::printf("acceptance: all 10 criteria pass\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures;
}
