#include "sqs/problem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sqs/errors.hpp"

namespace sqs {

HSpec HSpec::power_of_distance(double c, double sigma) {
    HSpec h;
    h.kind = Kind::PowerOfDistance;
    h.c = c;
    h.sigma = sigma;
    return h;
}

HSpec HSpec::tabulated(GridFunction table) {
    HSpec h;
    h.kind = Kind::Tabulated;
    h.table = std::move(table);
    return h;
}

GridFunction HSpec::sample(const Mesh& mesh) const {
    if (kind == Kind::Tabulated) return resample(table, mesh);
    GridFunction out = boundary_distance(mesh);
    for (double& x : out.values) x = c * std::pow(x, sigma);
    return out;
}

BSpec BSpec::constant(double value) {
    BSpec b;
    b.kind = Kind::Constant;
    b.value = value;
    return b;
}

BSpec BSpec::tabulated(GridFunction table) {
    BSpec b;
    b.kind = Kind::Tabulated;
    b.table = std::move(table);
    return b;
}

GridFunction BSpec::sample(const Mesh& mesh) const {
    if (kind == Kind::Tabulated) return resample(table, mesh);
    return GridFunction(mesh, value);
}

double BSpec::sup_norm() const {
    if (kind == Kind::Constant) return std::abs(value);
    double s = 0.0;
    for (double x : table.values) s = std::max(s, std::abs(x));
    return s;
}

double BSpec::min_value() const { return kind == Kind::Constant ? value : table.min(); }
double BSpec::max_value() const { return kind == Kind::Constant ? value : table.max(); }

NonlinearityCase NonlinearityCase::sublinear(double p, BSpec b) {
    return NonlinearityCase{Tag::Sublinear, p, std::move(b)};
}

NonlinearityCase NonlinearityCase::critical_type(double q, BSpec b) {
    return NonlinearityCase{Tag::CriticalType, q, std::move(b)};
}

ValidationReport validate(const ProblemSpec& spec) {
    ValidationReport rep;
    auto violate = [&](const std::string& msg) {
        rep.valid = false;
        rep.violations.push_back(msg);
    };

    if (!(spec.gamma > 1.0)) violate("gamma: must satisfy gamma > 1, got " + std::to_string(spec.gamma));
    if (!(spec.lambda >= 0.0)) violate("lambda: must be >= 0");

    if (spec.h.kind == HSpec::Kind::PowerOfDistance) {
        if (!(spec.h.c > 0.0)) violate("h.c: must be > 0");
        if (!(spec.h.sigma > -1.0)) violate("h.sigma: must be > -1 for h in L^1 on a box domain");
        rep.condition_D_holds = spec.h.sigma > spec.gamma - 1.0;
    } else {
        if (spec.h.table.values.empty()) violate("h: tabulated h has no values");
        double hmin = spec.h.table.values.empty() ? 0.0 : spec.h.table.min();
        if (hmin < 0.0) violate("h: must be positive a.e.");
        else if (hmin == 0.0) rep.warnings.push_back("h: tabulated h vanishes at some node");
        rep.condition_D_holds = false;  // not decidable from a table
    }

    if (spec.f.tag == NonlinearityCase::Tag::Sublinear) {
        if (!(spec.f.exponent > 0.0 && spec.f.exponent < 1.0))
            violate("p: sublinear case requires p in (0,1), got " + std::to_string(spec.f.exponent));
        if (spec.f.b.max_value() <= 0.0)
            rep.warnings.push_back("b: positive part is identically zero (outside the existence hypotheses; "
                                   "allowed for degenerate test specs)");
    } else {
        if (!(spec.f.exponent > 2.0))
            violate("q: critical-type case requires q > 2, got " + std::to_string(spec.f.exponent));
        if (spec.f.b.min_value() < 0.0) violate("b: critical-type case requires b >= 0");
    }
    return rep;
}

void ensure_valid(const ProblemSpec& spec) {
    const ValidationReport rep = validate(spec);
    if (!rep.valid) throw InvalidSpec(rep.violations.front());
}

namespace {

bool is_first_eigenfunction(const GridFunction& v) {
    const GridFunction phi = first_eigenfunction(v.mesh).first;
    for (std::size_t i = 0; i < v.values.size(); ++i)
        if (std::abs(v.values[i] - phi.values[i]) > 1e-13) return false;
    return true;
}

// exp(e * ln(base)) capped at 1e300; base > 0
double capped_pow(double base, double e) {
    const double expo = e * std::log(base);
    if (expo > 690.0) return 1e300;
    return std::exp(expo);
}

enum class Integrand { Plain, Derivative, Transformed };

CompatReport classify_one(const ProblemSpec& spec, const GridFunction& v, int levels,
                          Integrand which) {
    if (levels < 3) throw std::invalid_argument("compat_integral: levels must be >= 3");
    if (v.min() <= 0.0) throw NonPositiveField("compat_integral: v must be > 0 on interior nodes");
    const TransformKernel& k = default_kernel();
    const bool analytic_phi1 = is_first_eigenfunction(v);

    CompatReport rep;
    Mesh mesh = spec.mesh;
    GridFunction vl = v;
    for (int l = 0; l < levels; ++l) {
        if (l > 0) {
            mesh = mesh.refined();
            vl = analytic_phi1 ? first_eigenfunction(mesh).first : resample(v, mesh);
        }
        const GridFunction h = spec.h.sample(mesh);
        double acc = 0.0;
        for (std::size_t i = 0; i < vl.values.size(); ++i) {
            const double vi = vl.values[i];
            if (vi <= 0.0) throw NonPositiveField("compat_integral: resampled v must stay > 0");
            double term = 0.0;
            switch (which) {
                case Integrand::Plain:
                    term = capped_pow(vi, 1.0 - spec.gamma);
                    break;
                case Integrand::Derivative: {
                    const double gv = k.g(vi);
                    term = capped_pow(gv, -spec.gamma) * k.g_prime(vi) * vi;
                    break;
                }
                case Integrand::Transformed:
                    term = capped_pow(k.g(vi), 1.0 - spec.gamma);
                    break;
            }
            acc += h.values[i] * term;
        }
        rep.mesh_sizes.push_back(mesh.n_per_axis);
        rep.estimates.push_back(acc * volume_weight(mesh));
        if (l > 0) rep.ratios.push_back(rep.estimates[l] / rep.estimates[l - 1]);
    }
    const std::size_t nr = rep.ratios.size();
    const bool divergent = rep.ratios[nr - 1] >= 1.0 + kDivergenceThreshold &&
                           rep.ratios[nr - 2] >= 1.0 + kDivergenceThreshold;
    rep.classification = divergent ? CompatReport::Class::Divergent : CompatReport::Class::Convergent;
    return rep;
}

}  // namespace

CompatReport compat_integral(const ProblemSpec& spec, const GridFunction& v, int levels) {
    return classify_one(spec, v, levels, Integrand::Plain);
}

DualityReport classify_duality(const ProblemSpec& spec, const GridFunction& v, int levels) {
    DualityReport rep;
    rep.plain = classify_one(spec, v, levels, Integrand::Plain);
    rep.derivative = classify_one(spec, v, levels, Integrand::Derivative);
    rep.transformed = classify_one(spec, v, levels, Integrand::Transformed);
    return rep;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw InvalidSpec(key + ": not a number: '" + value + "'");
    }
}

int to_int(const std::string& key, const std::string& value) {
    const double x = to_real(key, value);
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 0.0) throw InvalidSpec(key + ": not an integer: '" + value + "'");
    return i;
}

}  // namespace

void apply_override(ProblemSpec& spec, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = lower(trim(raw_key));
    const std::string value = trim(raw_value);
    const std::string lvalue = lower(value);

    if (key == "dimension") {
        spec.mesh = Mesh(to_int(key, value), spec.mesh.n_per_axis);
    } else if (key == "n") {
        spec.mesh = Mesh(spec.mesh.dim, to_int(key, value));
    } else if (key == "gamma") {
        spec.gamma = to_real(key, value);
    } else if (key == "lambda") {
        spec.lambda = to_real(key, value);
    } else if (key == "h.kind") {
        if (lvalue != "power" && lvalue != "power_of_distance")
            throw InvalidSpec("h.kind: only 'power' is supported in spec files, got '" + value + "'");
        spec.h.kind = HSpec::Kind::PowerOfDistance;
    } else if (key == "h.c") {
        spec.h.c = to_real(key, value);
    } else if (key == "h.sigma") {
        spec.h.sigma = to_real(key, value);
    } else if (key == "case") {
        if (lvalue == "sublinear") {
            spec.f.tag = NonlinearityCase::Tag::Sublinear;
            spec.f.exponent = 0.5;
        } else if (lvalue == "critical" || lvalue == "critical_type") {
            spec.f.tag = NonlinearityCase::Tag::CriticalType;
            spec.f.exponent = spec.mesh.dim == 3 ? 12.0 : 4.0;
        } else {
            throw InvalidSpec("case: expected 'sublinear' or 'critical', got '" + value + "'");
        }
    } else if (key == "p") {
        if (spec.f.tag != NonlinearityCase::Tag::Sublinear)
            throw InvalidSpec("p: only valid for case=sublinear");
        spec.f.exponent = to_real(key, value);
    } else if (key == "q") {
        if (spec.f.tag != NonlinearityCase::Tag::CriticalType)
            throw InvalidSpec("q: only valid for case=critical");
        spec.f.exponent = to_real(key, value);
    } else if (key == "b.kind") {
        if (lvalue != "constant")
            throw InvalidSpec("b.kind: only 'constant' is supported in spec files, got '" + value + "'");
        spec.f.b.kind = BSpec::Kind::Constant;
    } else if (key == "b.value") {
        spec.f.b.value = to_real(key, value);
    } else {
        throw InvalidSpec("unknown key: '" + raw_key + "'");
    }
}

ProblemSpec parse_spec(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw InvalidSpec("malformed line (expected key=value): '" + t + "'");
        const std::string key = lower(trim(t.substr(0, eq)));
        if (kv.count(key)) throw InvalidSpec("duplicate key: '" + key + "'");
        kv[key] = trim(t.substr(eq + 1));
    }

    ProblemSpec spec;
    spec.mesh = Mesh(1, 1023);
    spec.f = NonlinearityCase::sublinear(0.5, BSpec::constant(1.0));
    spec.h = HSpec::power_of_distance(1.0, 0.0);

    // mesh shape and case first, since other keys depend on them
    for (const char* first : {"dimension", "n", "case"}) {
        auto it = kv.find(first);
        if (it != kv.end()) {
            apply_override(spec, it->first, it->second);
            kv.erase(it);
        }
    }
    for (const auto& [key, value] : kv) apply_override(spec, key, value);
    return spec;
}

ProblemSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("cannot open spec file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

}  // namespace sqs
