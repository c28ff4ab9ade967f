#include "sqs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sqs {

Mesh::Mesh(int dimension, int n) : dim(dimension), n_per_axis(n) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Mesh: dimension must be 1, 2 or 3");
    if (n < 3) throw std::invalid_argument("Mesh: n_per_axis must be >= 3");
    spacing = 1.0 / (n + 1);
}

std::size_t Mesh::size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n_per_axis);
    return s;
}

std::array<double, 3> Mesh::coords(std::size_t idx) const {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    const auto n = static_cast<std::size_t>(n_per_axis);
    for (int a = dim - 1; a >= 0; --a) {
        x[static_cast<std::size_t>(a)] = static_cast<double>(idx % n + 1) * spacing;
        idx /= n;
    }
    return x;
}

Mesh Mesh::refined() const { return Mesh(dim, 2 * (n_per_axis + 1) - 1); }

double GridFunction::min() const { return *std::min_element(values.begin(), values.end()); }
double GridFunction::max() const { return *std::max_element(values.begin(), values.end()); }

GridFunction boundary_distance(const Mesh& mesh) {
    GridFunction d(mesh);
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const auto x = mesh.coords(i);
        double dist = 1.0;
        for (int a = 0; a < mesh.dim; ++a)
            dist = std::min({dist, x[static_cast<std::size_t>(a)], 1.0 - x[static_cast<std::size_t>(a)]});
        d.values[i] = dist;
    }
    return d;
}

std::pair<GridFunction, double> first_eigenfunction(const Mesh& mesh) {
    GridFunction phi(mesh);
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
        const auto x = mesh.coords(i);
        double val = 1.0;
        for (int a = 0; a < mesh.dim; ++a)
            val *= std::sin(std::numbers::pi * x[static_cast<std::size_t>(a)]);
        phi.values[i] = val;
    }
    return {phi, mesh.dim * std::numbers::pi * std::numbers::pi};
}

namespace {

std::array<std::size_t, 3> strides_of(const Mesh& m) {
    const auto n = static_cast<std::size_t>(m.n_per_axis);
    if (m.dim == 1) return {1, 0, 0};
    if (m.dim == 2) return {n, 1, 0};
    return {n * n, n, 1};
}

}  // namespace

GridFunction apply_laplacian(const GridFunction& v) {
    const Mesh& m = v.mesh;
    const auto n = static_cast<std::size_t>(m.n_per_axis);
    const double inv_h2 = 1.0 / (m.spacing * m.spacing);
    const auto strides = strides_of(m);
    GridFunction out(m);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        double acc = 2.0 * m.dim * v.values[i];
        // axis indices, last axis fastest
        std::size_t idx = i;
        std::size_t axis_index[3];
        for (int a = m.dim - 1; a >= 0; --a) {
            axis_index[a] = idx % n;
            idx /= n;
        }
        for (int a = 0; a < m.dim; ++a) {
            const std::size_t stride = strides[static_cast<std::size_t>(a)];
            if (axis_index[a] > 0) acc -= v.values[i - stride];
            if (axis_index[a] + 1 < n) acc -= v.values[i + stride];
        }
        out.values[i] = acc * inv_h2;
    }
    return out;
}

GridFunction central_gradient_sq(const GridFunction& v) {
    const Mesh& m = v.mesh;
    const auto n = static_cast<std::size_t>(m.n_per_axis);
    const double inv_2h = 1.0 / (2.0 * m.spacing);
    const auto strides = strides_of(m);
    GridFunction out(m);
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        std::size_t idx = i;
        std::size_t axis_index[3];
        for (int a = m.dim - 1; a >= 0; --a) {
            axis_index[a] = idx % n;
            idx /= n;
        }
        double acc = 0.0;
        for (int a = 0; a < m.dim; ++a) {
            const std::size_t stride = strides[static_cast<std::size_t>(a)];
            const double plus = axis_index[a] + 1 < n ? v.values[i + stride] : 0.0;
            const double minus = axis_index[a] > 0 ? v.values[i - stride] : 0.0;
            const double d = (plus - minus) * inv_2h;
            acc += d * d;
        }
        out.values[i] = acc;
    }
    return out;
}

double volume_weight(const Mesh& mesh) {
    double w = 1.0;
    for (int a = 0; a < mesh.dim; ++a) w *= mesh.spacing;
    return w;
}

double h1_norm_sq(const GridFunction& v) {
    const GridFunction av = apply_laplacian(v);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i) acc += v.values[i] * av.values[i];
    return acc * volume_weight(v.mesh);
}

double l2_norm_sq(const GridFunction& v) {
    double acc = 0.0;
    for (double x : v.values) acc += x * x;
    return acc * volume_weight(v.mesh);
}

double integrate(const GridFunction& w) {
    double acc = 0.0;
    for (double x : w.values) acc += x;
    return acc * volume_weight(w.mesh);
}

namespace {

GridFunction thomas_solve(const GridFunction& rhs, const std::vector<double>& shift) {
    const Mesh& m = rhs.mesh;
    const std::size_t n = m.size();
    const double inv_h2 = 1.0 / (m.spacing * m.spacing);
    std::vector<double> c(n), d(n);
    double diag0 = 2.0 * inv_h2 + (shift.empty() ? 0.0 : shift[0]);
    c[0] = -inv_h2 / diag0;
    d[0] = rhs.values[0] / diag0;
    for (std::size_t i = 1; i < n; ++i) {
        const double diag = 2.0 * inv_h2 + (shift.empty() ? 0.0 : shift[i]);
        const double denom = diag + inv_h2 * c[i - 1];
        c[i] = -inv_h2 / denom;
        d[i] = (rhs.values[i] + inv_h2 * d[i - 1]) / denom;
    }
    GridFunction x(m);
    x.values[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x.values[i] = d[i] - c[i] * x.values[i + 1];
    return x;
}

}  // namespace

GridFunction shifted_poisson_solve(const GridFunction& rhs, const std::vector<double>& shift,
                                   double rel_tol, int max_iters) {
    if (!shift.empty() && shift.size() != rhs.values.size())
        throw std::invalid_argument("shifted_poisson_solve: shift size mismatch");
    if (rhs.mesh.dim == 1) return thomas_solve(rhs, shift);

    const Mesh& m = rhs.mesh;
    const std::size_t n = m.size();
    const double inv_h2 = 1.0 / (m.spacing * m.spacing);
    auto apply = [&](const GridFunction& v) {
        GridFunction av = apply_laplacian(v);
        if (!shift.empty())
            for (std::size_t i = 0; i < n; ++i) av.values[i] += shift[i] * v.values[i];
        return av;
    };
    const double diag_base = 2.0 * m.dim * inv_h2;

    GridFunction x(m);
    GridFunction r = rhs;
    GridFunction z(m);
    for (std::size_t i = 0; i < n; ++i)
        z.values[i] = r.values[i] / (diag_base + (shift.empty() ? 0.0 : shift[i]));
    GridFunction p = z;
    double rz = 0.0, bnorm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        rz += r.values[i] * z.values[i];
        bnorm2 += rhs.values[i] * rhs.values[i];
    }
    const double stop = rel_tol * rel_tol * bnorm2;
    for (int k = 0; k < max_iters; ++k) {
        double rnorm2 = 0.0;
        for (double ri : r.values) rnorm2 += ri * ri;
        if (rnorm2 <= stop) break;
        GridFunction ap = apply(p);
        double pap = 0.0;
        for (std::size_t i = 0; i < n; ++i) pap += p.values[i] * ap.values[i];
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x.values[i] += alpha * p.values[i];
            r.values[i] -= alpha * ap.values[i];
        }
        for (std::size_t i = 0; i < n; ++i)
            z.values[i] = r.values[i] / (diag_base + (shift.empty() ? 0.0 : shift[i]));
        double rz_new = 0.0;
        for (std::size_t i = 0; i < n; ++i) rz_new += r.values[i] * z.values[i];
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p.values[i] = z.values[i] + beta * p.values[i];
    }
    return x;
}

GridFunction poisson_solve(const GridFunction& rhs, double rel_tol) {
    return shifted_poisson_solve(rhs, {}, rel_tol);
}

GridFunction resample(const GridFunction& v, const Mesh& target) {
    if (v.mesh.dim != target.dim)
        throw std::invalid_argument("resample: dimension mismatch");
    if (v.mesh == target) return v;
    const Mesh& src = v.mesh;
    const auto ns = static_cast<std::size_t>(src.n_per_axis);
    const auto strides = strides_of(src);

    // value at integer source index, -1 and n map to the zero boundary
    auto src_at = [&](const long idx[3]) -> double {
        std::size_t flat = 0;
        for (int a = 0; a < src.dim; ++a) {
            if (idx[a] < 0 || idx[a] >= static_cast<long>(ns)) return 0.0;
            flat += static_cast<std::size_t>(idx[a]) * strides[static_cast<std::size_t>(a)];
        }
        return v.values[flat];
    };

    GridFunction out(target);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const auto x = target.coords(i);
        long base[3] = {0, 0, 0};
        double frac[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < src.dim; ++a) {
            const double u = x[static_cast<std::size_t>(a)] / src.spacing - 1.0;
            double fl = std::floor(u);
            base[a] = static_cast<long>(fl);
            frac[a] = u - fl;
        }
        double acc = 0.0;
        const int corners = 1 << src.dim;
        for (int c = 0; c < corners; ++c) {
            long idx[3];
            double w = 1.0;
            for (int a = 0; a < src.dim; ++a) {
                const int bit = (c >> a) & 1;
                idx[a] = base[a] + bit;
                w *= bit ? frac[a] : (1.0 - frac[a]);
            }
            if (w != 0.0) acc += w * src_at(idx);
        }
        out.values[i] = acc;
    }
    return out;
}

void write_csv(const GridFunction& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    static const char* headers[3] = {"x,value\n", "x,y,value\n", "x,y,z,value\n"};
    out << headers[v.mesh.dim - 1];
    char buf[40];
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const auto x = v.mesh.coords(i);
        for (int a = 0; a < v.mesh.dim; ++a) {
            std::snprintf(buf, sizeof buf, "%.17g", x[static_cast<std::size_t>(a)]);
            out << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", v.values[i]);
        out << buf << '\n';
    }
}

GridFunction read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty file " + path);
    const int dim = static_cast<int>(std::count(line.begin(), line.end(), ','));
    if (dim < 1 || dim > 3) throw std::runtime_error("read_csv: bad header in " + path);
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto pos = line.find_last_of(',');
        values.push_back(std::stod(line.substr(pos + 1)));
    }
    const double root = std::pow(static_cast<double>(values.size()), 1.0 / dim);
    const int n = static_cast<int>(std::lround(root));
    Mesh m(dim, n);
    if (m.size() != values.size())
        throw std::runtime_error("read_csv: row count is not n^dim in " + path);
    GridFunction v(m);
    v.values = std::move(values);
    return v;
}

}  // namespace sqs
