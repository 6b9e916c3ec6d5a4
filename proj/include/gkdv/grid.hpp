#ifndef GKDV_GRID_HPP
#define GKDV_GRID_HPP

#include <cmath>
#include <span>
#include <vector>

#include "gkdv/errors.hpp"

namespace gkdv {

using Field = std::vector<double>;

// Uniform mesh on [0, L] truncating the half-line. x_j = j * dx.
struct GridSpec {
    double length = 0.0;
    int n_nodes = 0;
    double dx = 0.0;

    double x(int j) const { return static_cast<double>(j) * dx; }

    Field coordinates() const {
        Field xs(static_cast<std::size_t>(n_nodes));
        for (int j = 0; j < n_nodes; ++j) xs[static_cast<std::size_t>(j)] = x(j);
        return xs;
    }
};

inline GridSpec build_grid(double length, int n_nodes) {
    if (!std::isfinite(length) || length <= 0.0)
        throw ConfigError("build_grid: domain length must be finite and positive");
    if (n_nodes < 32)
        throw ConfigError("build_grid: need at least 32 nodes");
    GridSpec g;
    g.length = length;
    g.n_nodes = n_nodes;
    g.dx = length / static_cast<double>(n_nodes - 1);
    return g;
}

// Sample f(x) on all grid nodes.
template <class F>
Field sample(const GridSpec& grid, F&& f) {
    Field u(static_cast<std::size_t>(grid.n_nodes));
    for (int j = 0; j < grid.n_nodes; ++j) u[static_cast<std::size_t>(j)] = f(grid.x(j));
    return u;
}

inline void require_on_grid(std::span<const double> f, const GridSpec& grid, const char* what) {
    if (static_cast<int>(f.size()) != grid.n_nodes)
        throw ShapeError(std::string(what) + ": field length does not match grid");
}

// Composite trapezoid quadrature of (1+x)^p * f * g over [0, L], p in {0,1,2}.
inline double weighted_inner(std::span<const double> f, std::span<const double> g, int p,
                             const GridSpec& grid) {
    require_on_grid(f, grid, "weighted_inner(f)");
    require_on_grid(g, grid, "weighted_inner(g)");
    if (p < 0 || p > 2) throw ConfigError("weighted_inner: weight exponent must be 0, 1 or 2");
    const int n = grid.n_nodes;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        double xw = 1.0 + grid.x(j);
        double weight = (p == 0) ? 1.0 : (p == 1 ? xw : xw * xw);
        acc += w * weight * f[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(j)];
    }
    return acc * grid.dx;
}

inline double l2_norm_sq(std::span<const double> f, const GridSpec& grid) {
    return weighted_inner(f, f, 0, grid);
}

// Trapezoid integral of |f|^p (discrete L^p norm to the p-th power).
inline double lp_norm(std::span<const double> f, double p, const GridSpec& grid) {
    require_on_grid(f, grid, "lp_norm");
    const int n = grid.n_nodes;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        acc += w * std::pow(std::fabs(f[static_cast<std::size_t>(j)]), p);
    }
    return std::pow(acc * grid.dx, 1.0 / p);
}

inline double sup_norm(std::span<const double> f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::fabs(v));
    return m;
}

inline bool all_finite(std::span<const double> f) {
    for (double v : f)
        if (!std::isfinite(v)) return false;
    return true;
}

// Fraction of the L2 mass sitting in the last `fraction` of the domain.
// Used as the right-boundary adequacy diagnostic for the truncation length.
inline double boundary_mass_fraction(std::span<const double> u, const GridSpec& grid,
                                     double fraction = 0.1) {
    require_on_grid(u, grid, "boundary_mass_fraction");
    double total = 0.0, tail = 0.0;
    const double cutoff = grid.length * (1.0 - fraction);
    const int n = grid.n_nodes;
    for (int j = 0; j < n; ++j) {
        double w = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        double v = w * u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
        total += v;
        if (grid.x(j) >= cutoff) tail += v;
    }
    return total > 0.0 ? tail / total : 0.0;
}

} // namespace gkdv

#endif
