#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace sqs {

/// Uniform box mesh on the unit interval/square/cube. Only interior nodes
/// are indexed; the zero boundary trace is implicit.
struct Mesh {
    int dim = 1;          // 1, 2 or 3
    int n_per_axis = 3;   // interior nodes per axis
    double spacing = 0.25;

    Mesh() = default;
    Mesh(int dimension, int n);

    std::size_t size() const;
    /// Coordinates of the flat node index (row-major, last axis fastest).
    std::array<double, 3> coords(std::size_t idx) const;
    /// Mesh with the spacing halved (interior count 2(n+1)-1).
    Mesh refined() const;

    bool operator==(const Mesh&) const = default;
};

/// Nodal field over the interior nodes of a mesh; boundary trace is zero
/// by construction.
struct GridFunction {
    Mesh mesh;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const Mesh& m, double fill = 0.0)
        : mesh(m), values(m.size(), fill) {}

    double min() const;
    double max() const;
};

/// d(x, boundary): min over axes of min(x_a, 1 - x_a). Exact for boxes.
GridFunction boundary_distance(const Mesh& mesh);

/// Closed-form first Dirichlet eigenfunction (product of sin(pi x_a),
/// continuum max 1) and its eigenvalue N pi^2.
std::pair<GridFunction, double> first_eigenfunction(const Mesh& mesh);

/// Second-order (2N+1)-point -Laplacian with the zero boundary folded in.
GridFunction apply_laplacian(const GridFunction& v);

/// Sum over axes of squared central first differences, nodewise
/// (|grad v|^2 with the boundary folded in as zero).
GridFunction central_gradient_sq(const GridFunction& v);

/// v^T (-Lap_h) v * spacing^N; the discrete H_0^1 seminorm squared.
double h1_norm_sq(const GridFunction& v);

double l2_norm_sq(const GridFunction& v);

/// Lumped rectangle-rule integral: sum of nodal values * spacing^N.
double integrate(const GridFunction& w);

double volume_weight(const Mesh& mesh);  // spacing^dim

/// Solves (-Lap_h + diag(shift)) d = rhs; shift must be nonnegative.
/// Thomas algorithm in 1-D, Jacobi-preconditioned CG otherwise.
GridFunction shifted_poisson_solve(const GridFunction& rhs, const std::vector<double>& shift,
                                   double rel_tol = 1e-12, int max_iters = 20000);
GridFunction poisson_solve(const GridFunction& rhs, double rel_tol = 1e-12);

/// Multilinear interpolation of v onto a refined/coarsened box mesh of the
/// same dimension (boundary values taken as zero).
GridFunction resample(const GridFunction& v, const Mesh& target);

/// CSV with header `x[,y[,z]],value`, one row per interior node, row-major,
/// 17 significant digits (bit-exact round trip).
void write_csv(const GridFunction& v, const std::string& path);
GridFunction read_csv(const std::string& path);

}  // namespace sqs
