#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqs/grid.hpp"
#include "sqs/transform.hpp"

namespace sqs {

/// Singular weight h. Either c * d(x,boundary)^sigma (resampled analytically
/// under refinement) or a tabulated nodal field (linearly interpolated).
struct HSpec {
    enum class Kind { PowerOfDistance, Tabulated };
    Kind kind = Kind::PowerOfDistance;
    double c = 1.0;
    double sigma = 0.0;
    GridFunction table;

    static HSpec power_of_distance(double c, double sigma);
    static HSpec tabulated(GridFunction table);

    GridFunction sample(const Mesh& mesh) const;
};

/// Coefficient b of the nonlinearity; constant or tabulated.
struct BSpec {
    enum class Kind { Constant, Tabulated };
    Kind kind = Kind::Constant;
    double value = 1.0;
    GridFunction table;

    static BSpec constant(double value);
    static BSpec tabulated(GridFunction table);

    GridFunction sample(const Mesh& mesh) const;
    double sup_norm() const;
    double min_value() const;
    double max_value() const;
};

/// f(x,s) = lambda b(x) s^p (sublinear) or f(x,s) = -b(x) s^{q-1}
/// (critical-type, b >= 0).
struct NonlinearityCase {
    enum class Tag { Sublinear, CriticalType };
    Tag tag = Tag::Sublinear;
    double exponent = 0.5;  // p for Sublinear, q for CriticalType
    BSpec b;

    static NonlinearityCase sublinear(double p, BSpec b);
    static NonlinearityCase critical_type(double q, BSpec b);
};

struct ProblemSpec {
    double gamma = 2.0;  // singularity exponent, > 1
    HSpec h;
    NonlinearityCase f;
    double lambda = 1.0;  // multiplies b in the sublinear case
    Mesh mesh;
};

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    bool condition_D_holds = false;  // sigma > gamma - 1 for power-kind h
};

ValidationReport validate(const ProblemSpec& spec);
/// Throws InvalidSpec naming the first violated hypothesis.
void ensure_valid(const ProblemSpec& spec);

struct CompatReport {
    enum class Class { Convergent, Divergent };
    Class classification = Class::Convergent;
    std::vector<int> mesh_sizes;     // interior nodes per axis at each level
    std::vector<double> estimates;   // lumped integral at each level
    std::vector<double> ratios;      // estimates[l] / estimates[l-1]
    bool convergent() const { return classification == Class::Convergent; }
};

/// Refinement-trend threshold: divergent iff the integral grows by more
/// than 5% over each of the last two mesh doublings.
inline constexpr double kDivergenceThreshold = 0.05;

/// Classifies the compatibility integral  I = int h |v|^{1-gamma}  by its
/// trend over `levels` successive mesh doublings. v is resampled
/// analytically when it equals the first eigenfunction, else by linear
/// interpolation. The trend is a numerical surrogate for the analytic
/// convergent/divergent dichotomy.
CompatReport compat_integral(const ProblemSpec& spec, const GridFunction& v, int levels);

struct DualityReport {
    CompatReport plain;       // int h |v|^{1-gamma}
    CompatReport derivative;  // int h g(v)^{-gamma} g'(v) v
    CompatReport transformed; // int h g(v)^{1-gamma}
    bool agree() const {
        return plain.classification == derivative.classification &&
               plain.classification == transformed.classification;
    }
};

/// Classifies all three integrals of the duality chain with the same
/// refinement protocol.
DualityReport classify_duality(const ProblemSpec& spec, const GridFunction& v, int levels);

/// Plain-text key=value spec format. Case-insensitive keys; unknown keys
/// are errors. Keys: dimension, n, gamma, lambda, h.kind, h.c, h.sigma,
/// case, p, q, b.kind, b.value.
ProblemSpec parse_spec(const std::string& text);
ProblemSpec load_spec(const std::string& path);
/// Applies a `key=value` override to an already-parsed spec.
void apply_override(ProblemSpec& spec, const std::string& key, const std::string& value);

}  // namespace sqs
