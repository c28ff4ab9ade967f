#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sqs/energy.hpp"
#include "sqs/errors.hpp"
#include "sqs/transform.hpp"

using namespace sqs;

namespace {

constexpr double kPi = std::numbers::pi;

ProblemSpec reference_spec(int n = 1023) {
    ProblemSpec spec;
    spec.gamma = 2.0;
    spec.h = HSpec::power_of_distance(1.0, 1.5);
    spec.f = NonlinearityCase::sublinear(0.5, BSpec::constant(1.0));
    spec.mesh = Mesh(1, n);
    return spec;
}

double dot_weighted(const GridFunction& a, const GridFunction& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
    return acc * volume_weight(a.mesh);
}

// Adaptive Simpson quadrature for the continuum oracle integrals.
double adaptive_simpson(double (*f)(double), double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate_adaptive(double (*f)(double), double a, double b, double tol = 1e-11) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

double singular_integrand(double x) {
    const double d = std::min(x, 1.0 - x);
    return std::pow(d, 1.5) / default_kernel().g(std::sin(kPi * x));
}

double force_integrand(double x) {
    return std::pow(default_kernel().g(std::sin(kPi * x)), 1.5);
}

}  // namespace

TEST_CASE("independent quadrature oracle reproduces the frozen reference integrals") {
    // the frozen values below were produced with 40-digit arithmetic
    const double sing = integrate_adaptive(&singular_integrand, 1e-12, 1.0 - 1e-12);
    CHECK(sing == doctest::Approx(0.20832244127993574).epsilon(1e-7));
    const double force = integrate_adaptive(&force_integrand, 0.0, 1.0);
    CHECK(force == doctest::Approx(0.45146333039212018).epsilon(1e-9));
}

TEST_CASE("energy breakdown matches the continuum reference on a fine mesh") {
    const ProblemSpec spec = reference_spec(8191);
    const GridFunction phi1 = first_eigenfunction(spec.mesh).first;
    const EnergyBreakdown e = EnergyModel(spec).energy(phi1);
    CHECK_FALSE(e.capped);
    CHECK(e.dirichlet == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-6));
    CHECK(e.singular == doctest::Approx(0.20832244127993574).epsilon(1e-4));
    CHECK(e.nonlinear == doctest::Approx(-0.45146333039212018 / 1.5).epsilon(1e-5));
    CHECK(e.total == doctest::Approx(2.3747479879575286).epsilon(1e-4));
    CHECK(e.total == doctest::Approx(e.dirichlet + e.singular + e.nonlinear).epsilon(1e-14));
}

TEST_CASE("residual is the weighted gradient of the energy") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int variant = 0; variant < 3; ++variant) {
        ProblemSpec spec = reference_spec(127);
        if (variant == 1) spec.gamma = 3.0;
        if (variant == 2) spec.f = NonlinearityCase::critical_type(4.0, BSpec::constant(1.0));
        const EnergyModel model(spec);
        GridFunction v = first_eigenfunction(spec.mesh).first;
        for (double& x : v.values) x = 0.5 + 0.5 * x;  // keep well away from zero
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
            INFO("variant=", variant, " direction=", k);
            CHECK(fd == doctest::Approx(exact).epsilon(1e-5));
        }
    }
}

TEST_CASE("pure Dirichlet limit: zero b and flat tiny h") {
    ProblemSpec spec = reference_spec(255);
    spec.f.b = BSpec::constant(0.0);
    const EnergyModel model(spec);
    const GridFunction phi1 = first_eigenfunction(spec.mesh).first;
    const EnergyBreakdown e = model.energy(phi1);
    CHECK(e.nonlinear == 0.0);
    CHECK(e.total == doctest::Approx(0.5 * h1_norm_sq(phi1) + e.singular).epsilon(1e-14));
}

TEST_CASE("nehari gap identity: gap(t v) = t phi'(t)") {
    const ProblemSpec spec = reference_spec(255);
    const EnergyModel model(spec);
    const GridFunction v = first_eigenfunction(spec.mesh).first;
    for (double t : {0.3, 1.0, 2.5, 10.0}) {
        GridFunction tv = v;
        for (double& x : tv.values) x *= t;
        const double lhs = model.nehari_gap(tv);
        const double rhs = t * model.phi_prime(v, t);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("singular part decreases as the field grows") {
    const ProblemSpec spec = reference_spec(255);
    const EnergyModel model(spec);
    GridFunction v = first_eigenfunction(spec.mesh).first;
    double prev = model.energy(v).singular;
    for (double c : {1.5, 2.0, 4.0}) {
        GridFunction cv = v;
        for (double& x : cv.values) x *= c;
        const double cur = model.energy(cv).singular;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("stiffness diagonal matches finite differences of the reaction term") {
    const ProblemSpec spec = reference_spec(63);
    const EnergyModel model(spec);
    GridFunction v = first_eigenfunction(spec.mesh).first;
    for (double& x : v.values) x = 0.3 + 0.4 * x;
    const std::vector<double> d = model.stiffness_diagonal(v);
    // residual - (-Lap v) = -N(v), so its forward difference is -dN/dv directly
    auto neg_reaction = [&](const GridFunction& w, std::size_t i) {
        return model.residual(w).values[i] - apply_laplacian(w).values[i];
    };
    for (std::size_t i : {std::size_t{0}, std::size_t{10}, std::size_t{31}, std::size_t{62}}) {
        const double eps = 1e-6;
        GridFunction vp = v, vm = v;
        vp.values[i] += eps;
        vm.values[i] -= eps;
        const double fd = (neg_reaction(vp, i) - neg_reaction(vm, i)) / (2.0 * eps);
        CHECK(d[i] == doctest::Approx(std::max(0.0, fd)).epsilon(1e-4));
    }
    for (double x : d) CHECK(x >= 0.0);
}

TEST_CASE("primal residual equals the dual residual divided by g'") {
    for (int variant = 0; variant < 2; ++variant) {
        ProblemSpec spec = reference_spec(127);
        if (variant == 1) {
            spec.gamma = 3.0;
            spec.f = NonlinearityCase::critical_type(4.0, BSpec::constant(0.5));
        }
        const EnergyModel model(spec);
        GridFunction v = first_eigenfunction(spec.mesh).first;
        for (std::size_t i = 0; i < v.values.size(); ++i)
            v.values[i] = 0.2 + v.values[i] * (1.0 + 0.1 * std::sin(3.0 * i));
        const GridFunction rd = model.residual(v);
        const GridFunction rp = model.primal_residual(v);
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            const double want = rd.values[i] / default_kernel().g_prime(v.values[i]);
            CHECK(rp.values[i] == doctest::Approx(want).epsilon(1e-9));
        }
    }
}

TEST_CASE("nonpositive fields are rejected") {
    const ProblemSpec spec = reference_spec(63);
    const EnergyModel model(spec);
    GridFunction v = first_eigenfunction(spec.mesh).first;
    v.values[5] = 0.0;
    CHECK_THROWS_AS(model.energy(v), NonPositiveField);
    CHECK_THROWS_AS(model.residual(v), NonPositiveField);
    const GridFunction ok = first_eigenfunction(spec.mesh).first;
    CHECK_THROWS_AS(model.phi(ok, 0.0), NonPositiveT);
    CHECK_THROWS_AS(model.phi_prime(ok, -1.0), NonPositiveT);
}

TEST_CASE("overflow cap flags instead of producing inf") {
    ProblemSpec spec = reference_spec(63);
    spec.gamma = 50.0;
    const EnergyModel model(spec);
    GridFunction v(spec.mesh, 1e-14);
    const EnergyBreakdown e = model.energy(v);
    CHECK(e.capped);
    CHECK(std::isfinite(e.total));
}
