#include "sqs/energy.hpp"

#include <algorithm>
#include <cmath>

#include "sqs/errors.hpp"
#include "sqs/transform.hpp"

namespace sqs {

namespace {

// exp(e * ln(base)) capped at 1e300
double capped_pow(double base, double e, bool* capped) {
    const double expo = e * std::log(base);
    if (expo > 690.0) {
        if (capped) *capped = true;
        return 1e300;
    }
    return std::exp(expo);
}

}  // namespace

EnergyModel::EnergyModel(const ProblemSpec& spec)
    : spec_(spec), h_(spec.h.sample(spec.mesh)), b_(spec.f.b.sample(spec.mesh)) {}

void EnergyModel::check_positive(const GridFunction& v) const {
    if (!(v.mesh == spec_.mesh))
        throw std::invalid_argument("EnergyModel: field mesh does not match spec mesh");
    for (double x : v.values)
        if (!(x > 0.0)) throw NonPositiveField("field must be > 0 on interior nodes");
}

EnergyBreakdown EnergyModel::energy(const GridFunction& v) const {
    check_positive(v);
    const TransformKernel& k = default_kernel();
    const double w = volume_weight(spec_.mesh);
    const bool sublinear = spec_.f.tag == NonlinearityCase::Tag::Sublinear;
    const double e = spec_.f.exponent;

    EnergyBreakdown out;
    out.dirichlet = 0.5 * h1_norm_sq(v);
    double sing = 0.0, nonlin = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double gv = k.g(v.values[i]);
        sing += h_.values[i] * capped_pow(gv, 1.0 - spec_.gamma, &out.capped);
        nonlin += b_.values[i] * std::pow(gv, sublinear ? e + 1.0 : e);
    }
    out.singular = sing * w / (spec_.gamma - 1.0);
    out.nonlinear = sublinear ? -spec_.lambda * nonlin * w / (e + 1.0) : nonlin * w / e;
    out.total = out.dirichlet + out.singular + out.nonlinear;
    return out;
}

GridFunction EnergyModel::residual(const GridFunction& v) const {
    check_positive(v);
    const TransformKernel& k = default_kernel();
    const bool sublinear = spec_.f.tag == NonlinearityCase::Tag::Sublinear;
    const double e = spec_.f.exponent;

    GridFunction r = apply_laplacian(v);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double gv = k.g(v.values[i]);
        const double gp = k.g_prime(v.values[i]);
        const double singular = h_.values[i] * capped_pow(gv, -spec_.gamma, nullptr) * gp;
        const double force = sublinear ? spec_.lambda * b_.values[i] * std::pow(gv, e) * gp
                                       : -b_.values[i] * std::pow(gv, e - 1.0) * gp;
        r.values[i] -= singular + force;
    }
    return r;
}

double EnergyModel::nehari_gap(const GridFunction& v) const {
    return phi_prime(v, 1.0);  // gap(v) = phi_v'(1) by the fiber identity
}

double EnergyModel::phi(const GridFunction& v, double t, double h1v) const {
    if (!(t > 0.0)) throw NonPositiveT("phi: t must be > 0");
    check_positive(v);
    const TransformKernel& k = default_kernel();
    const double w = volume_weight(spec_.mesh);
    const bool sublinear = spec_.f.tag == NonlinearityCase::Tag::Sublinear;
    const double e = spec_.f.exponent;
    if (h1v < 0.0) h1v = h1_norm_sq(v);

    double sing = 0.0, nonlin = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double gv = k.g(t * v.values[i]);
        sing += h_.values[i] * capped_pow(gv, 1.0 - spec_.gamma, nullptr);
        nonlin += b_.values[i] * std::pow(gv, sublinear ? e + 1.0 : e);
    }
    const double nonlinear = sublinear ? -spec_.lambda * nonlin * w / (e + 1.0) : nonlin * w / e;
    return 0.5 * t * t * h1v + sing * w / (spec_.gamma - 1.0) + nonlinear;
}

double EnergyModel::phi_prime(const GridFunction& v, double t, double h1v) const {
    if (!(t > 0.0)) throw NonPositiveT("phi_prime: t must be > 0");
    check_positive(v);
    const TransformKernel& k = default_kernel();
    const double w = volume_weight(spec_.mesh);
    const bool sublinear = spec_.f.tag == NonlinearityCase::Tag::Sublinear;
    const double e = spec_.f.exponent;
    if (h1v < 0.0) h1v = h1_norm_sq(v);

    double acc = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double tv = t * v.values[i];
        const double gv = k.g(tv);
        const double gp = k.g_prime(tv);
        const double singular = h_.values[i] * capped_pow(gv, -spec_.gamma, nullptr) * gp;
        const double force = sublinear ? spec_.lambda * b_.values[i] * std::pow(gv, e) * gp
                                       : -b_.values[i] * std::pow(gv, e - 1.0) * gp;
        acc += (singular + force) * v.values[i];
    }
    return t * h1v - acc * w;
}

std::vector<double> EnergyModel::stiffness_diagonal(const GridFunction& v) const {
    const TransformKernel& k = default_kernel();
    const bool sublinear = spec_.f.tag == NonlinearityCase::Tag::Sublinear;
    const double e = spec_.f.exponent;
    std::vector<double> d(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double gv = k.g(v.values[i]);
        const double gp = k.g_prime(v.values[i]);
        const double gs = k.g_second(v.values[i]);
        // -d/dv [ g^a g' ] = -(a g^{a-1} g'^2 + g^a g'')
        const double singular =
            h_.values[i] * (spec_.gamma * capped_pow(gv, -spec_.gamma - 1.0, nullptr) * gp * gp -
                            capped_pow(gv, -spec_.gamma, nullptr) * gs);
        const double force =
            sublinear ? -spec_.lambda * b_.values[i] *
                            (e * std::pow(gv, e - 1.0) * gp * gp + std::pow(gv, e) * gs)
                      : b_.values[i] * ((e - 1.0) * std::pow(gv, e - 2.0) * gp * gp +
                                        std::pow(gv, e - 1.0) * gs);
        d[i] = std::max(0.0, singular + force);
    }
    return d;
}

GridFunction EnergyModel::primal_residual(const GridFunction& v) const {
    check_positive(v);
    const TransformKernel& k = default_kernel();
    const bool sublinear = spec_.f.tag == NonlinearityCase::Tag::Sublinear;
    const double e = spec_.f.exponent;

    const GridFunction neg_lap = apply_laplacian(v);
    const GridFunction grad2 = central_gradient_sq(v);
    GridFunction r(spec_.mesh);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double u = k.g(v.values[i]);
        const double gp = k.g_prime(v.values[i]);
        const double gs = k.g_second(v.values[i]);
        const double lap_v = -neg_lap.values[i];
        const double lap_u = gs * grad2.values[i] + gp * lap_v;
        const double grad_u2 = gp * gp * grad2.values[i];
        const double f = sublinear ? spec_.lambda * b_.values[i] * std::pow(u, e)
                                   : -b_.values[i] * std::pow(u, e - 1.0);
        r.values[i] = -(1.0 + 2.0 * u * u) * lap_u - 2.0 * u * grad_u2 -
                      h_.values[i] * capped_pow(u, -spec_.gamma, nullptr) - f;
    }
    return r;
}

EnergyBreakdown energy(const GridFunction& v, const ProblemSpec& spec) {
    return EnergyModel(spec).energy(v);
}

GridFunction residual(const GridFunction& v, const ProblemSpec& spec) {
    return EnergyModel(spec).residual(v);
}

double nehari_gap(const GridFunction& v, const ProblemSpec& spec) {
    return EnergyModel(spec).nehari_gap(v);
}

}  // namespace sqs
