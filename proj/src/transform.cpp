#include "sqs/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "sqs/errors.hpp"

namespace sqs {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

TransformKernel::TransformKernel(double newton_tol, int max_newton_iters, double series_switch)
    : newton_tol_(newton_tol), max_newton_iters_(max_newton_iters), series_switch_(series_switch) {
    if (!(newton_tol > 0.0)) throw std::invalid_argument("TransformKernel: newton_tol must be > 0");
    if (max_newton_iters < 8) throw std::invalid_argument("TransformKernel: max_newton_iters must be >= 8");
}

double TransformKernel::G(double s) const {
    return 0.5 * s * std::sqrt(1.0 + 2.0 * s * s) + std::asinh(kSqrt2 * s) / (2.0 * kSqrt2);
}

double TransformKernel::invert_positive(double t) const {
    // Bracket: G(s) >= s so the root lies in [0, t]; G(s) ~ s^2/sqrt(2)
    // for large s gives the other cap.
    double lo = 0.0;
    double hi = std::max(t, k0() * std::sqrt(t) + 1.0);
    double s = (t <= series_switch_) ? t - t * t * t / 3.0 : (t > 1.0 ? k0() * std::sqrt(t) : t);
    s = std::clamp(s, lo, hi);
    const double tol = newton_tol_ * std::max(1.0, t);
    for (int iter = 0; iter < max_newton_iters_; ++iter) {
        const double f = G(s) - t;
        if (std::abs(f) <= tol) return s;
        if (f > 0.0)
            hi = s;
        else
            lo = s;
        const double dg = std::sqrt(1.0 + 2.0 * s * s);
        double next = s - f / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
        if (next == s) return s;                                // interval exhausted in doubles
        s = next;
    }
    if (std::abs(G(s) - t) <= tol) return s;
    throw NonConvergence("TransformKernel::g: Newton did not converge at t=" + std::to_string(t));
}

double TransformKernel::g(double t) const {
    if (t == 0.0) return 0.0;
    return t > 0.0 ? invert_positive(t) : -invert_positive(-t);
}

double TransformKernel::g_prime(double t) const {
    const double s = g(t);
    return 1.0 / std::sqrt(1.0 + 2.0 * s * s);
}

double TransformKernel::g_second(double t) const {
    const double s = g(t);
    const double w = 1.0 + 2.0 * s * s;
    return -2.0 * s / (w * w);
}

namespace {

struct Checker {
    PropertyItem item;
    explicit Checker(std::string name) { item.name = std::move(name); item.pass = true; item.worst_margin = std::numeric_limits<double>::infinity(); }
    // margin >= 0 means the property holds at this sample.
    void observe(double margin) {
        if (margin < item.worst_margin) item.worst_margin = margin;
        if (margin < 0.0) item.pass = false;
    }
};

}  // namespace

PropertyReport TransformKernel::verify_properties(int n_samples, double t_max, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double lo = 1e-8;
    std::vector<double> ts(static_cast<std::size_t>(n_samples));
    for (auto& t : ts) t = lo * std::exp(unif(rng) * std::log(t_max / lo));
    std::sort(ts.begin(), ts.end());

    Checker c1("(1) invertible: G(g(t)) round-trips");
    Checker c2("(2) g(0) = 0");
    Checker c3("(3) 0 < g'(t) <= 1");
    Checker c4("(4) g(t)/2 <= t g'(t) <= g(t)");
    Checker c5("(5) |g(t)| <= |t|");
    Checker c6("(6) |g(t)| <= 2^{1/4} |t|^{1/2}");
    Checker c7("(7) g(t)^2 - g(t) g'(t) t >= 0");
    Checker c8("(8) g(t) >= g(1) t on (0,1], g(t) >= g(1) sqrt(t) beyond");
    Checker c9("(9) g''(t) < 0 for t > 0, mirrored for t < 0");
    Checker c10("(10) g^{1-gamma}, g^{-gamma} decreasing (gamma in {1.5,2,3})");
    Checker c11("(11) g(t)^p / t decreasing (p in {0.25,0.5,0.9})");
    Checker c12("(12) |g(t) g'(t)| <= 1/sqrt(2)");

    c2.observe(-std::abs(g(0.0)));
    double k0_est = 0.0;
    double worst_rt = 0.0;
    const double c8_const = g(1.0);

    double prev_t = -1.0, prev_g = 0.0;
    for (double t : ts) {
        const double gt = g(t);
        const double gp = g_prime(t);
        const double gs = g_second(t);
        const double gneg = g(-t);

        const double rt = std::abs(G(gt) - t) / std::max(1.0, t);
        worst_rt = std::max(worst_rt, rt);
        c1.observe(newton_tol_ - rt);
        // inverse direction, off-grid probe
        const double s_probe = gt;
        c1.observe(10.0 * newton_tol_ * std::max(1.0, s_probe) - std::abs(g(G(s_probe)) - s_probe));

        c3.observe(std::min(gp - 1e-300, 1.0 - gp));
        c4.observe(std::min(t * gp - 0.5 * gt, gt - t * gp));
        c5.observe(t - gt);
        c5.observe(t - std::abs(gneg));
        c6.observe((k0() + 1e-9) * std::sqrt(t) - gt);
        c7.observe(gt * gt - gt * gp * t + 1e-12);
        if (t <= 1.0)
            c8.observe(gt - c8_const * t);
        else
            c8.observe(gt - c8_const * std::sqrt(t));
        c9.observe(-gs);
        c9.observe(g_second(-t));
        c12.observe(1.0 / kSqrt2 - std::abs(gt * gp));

        if (prev_t > 0.0 && gt > prev_g) {
            for (double gamma : {1.5, 2.0, 3.0}) {
                c10.observe(std::pow(prev_g, 1.0 - gamma) - std::pow(gt, 1.0 - gamma));
                c10.observe(std::pow(prev_g, -gamma) - std::pow(gt, -gamma));
            }
            for (double p : {0.25, 0.5, 0.9})
                c11.observe(std::pow(prev_g, p) / prev_t - std::pow(gt, p) / t);
        }
        prev_t = t;
        prev_g = gt;
        k0_est = std::max(k0_est, gt / std::sqrt(t));
    }

    PropertyReport report;
    report.items = {c1.item, c2.item, c3.item, c4.item,  c5.item,  c6.item,
                    c7.item, c8.item, c9.item, c10.item, c11.item, c12.item};
    report.k0_estimate = k0_est;
    report.worst_round_trip = worst_rt;
    report.n_samples = n_samples;
    return report;
}

const TransformKernel& default_kernel() {
    static const TransformKernel kernel;
    return kernel;
}

}  // namespace sqs
