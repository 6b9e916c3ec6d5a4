#ifndef GKDV_OPERATORS_HPP
#define GKDV_OPERATORS_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gkdv/banded.hpp"
#include "gkdv/grid.hpp"

namespace gkdv {

// Boundary-condition descriptor for the truncated half-line problem.
//   left:  u(0)=0 always; additionally u_x(0)=0 when the fifth-order
//          regularization is active (eps > 0).
//   right: u = u_x = u_xx = 0 at x=L; additionally u_xxx = 0 when eps > 0.
struct BoundaryConfig {
    bool left_ux = false;
    bool right_uxxx = false;

    static BoundaryConfig for_eps(double eps) { return BoundaryConfig{eps > 0.0, eps > 0.0}; }
};

// Finite-difference differentiation matrix. Interior rows are centered,
// rows too close to an edge shift to one-sided windows of the same width,
// which removes any ghost nodes.
struct BandedOperator {
    int order = 0;     // derivative order m
    int accuracy = 0;  // formal accuracy of the one-sided closures
    BoundaryConfig bc;
    BandedMatrix mat;
    std::vector<std::uint8_t> one_sided;  // per-row flag: shifted closure row

    Field apply(std::span<const double> u) const { return mat.apply(u); }
    void apply(std::span<const double> u, std::span<double> y) const { mat.apply(u, y); }
};

namespace detail {

// Stencil width: odd point count giving at least the requested formal order.
inline int stencil_points(int order, int accuracy) {
    return (order % 2 == 1) ? order + accuracy : order + accuracy - 1;
}

} // namespace detail

// Differentiation matrix for the m-th derivative on a uniform grid.
// Not restricted to the orders exposed through d_op; the energy ledger
// uses m=2 internally.
inline BandedOperator derivative_matrix(const GridSpec& grid, int order, int accuracy,
                                        BoundaryConfig bc = {}) {
    if (accuracy != 2 && accuracy != 4)
        throw ConfigError("derivative_matrix: stencil accuracy must be 2 or 4");
    const int p = detail::stencil_points(order, accuracy);
    const int n = grid.n_nodes;
    if (n < p) throw ConfigError("derivative_matrix: grid too small for stencil");
    const int half = (p - 1) / 2;

    BandedOperator op;
    op.order = order;
    op.accuracy = accuracy;
    op.bc = bc;
    op.mat = BandedMatrix(n, p - 1, p - 1);
    op.one_sided.assign(static_cast<std::size_t>(n), 0);

    const Field xs = grid.coordinates();
    for (int i = 0; i < n; ++i) {
        int s = std::clamp(i - half, 0, n - p);
        if (s != i - half) op.one_sided[static_cast<std::size_t>(i)] = 1;
        auto w = fd_weights(xs[static_cast<std::size_t>(i)],
                            std::span<const double>(&xs[static_cast<std::size_t>(s)],
                                                    static_cast<std::size_t>(p)),
                            order);
        for (int q = 0; q < p; ++q) op.mat.at(i, s + q) = w[static_cast<std::size_t>(q)];
    }
    return op;
}

// Dispersive-operator factory restricted to the derivative orders the PDE uses.
inline BandedOperator d_op(const GridSpec& grid, int order, BoundaryConfig bc,
                           int accuracy = 2) {
    if (order != 1 && order != 3 && order != 5)
        throw ConfigError("d_op: derivative order must be 1, 3 or 5");
    return derivative_matrix(grid, order, accuracy, bc);
}

// One-sided second-derivative trace u_xx(0,t), formal order 2.
inline double boundary_trace_uxx(std::span<const double> u, const GridSpec& grid) {
    require_on_grid(u, grid, "boundary_trace_uxx");
    const Field xs = grid.coordinates();
    const int p = 4;
    auto w = fd_weights(0.0, std::span<const double>(xs.data(), p), 2);
    double acc = 0.0;
    for (int q = 0; q < p; ++q) acc += w[static_cast<std::size_t>(q)] * u[static_cast<std::size_t>(q)];
    return acc;
}

// A boundary constraint expressed as a sparse matrix row set equal to zero.
struct ConstraintRow {
    int row;
    std::vector<std::pair<int, double>> entries;
};

// Constraint rows replacing the PDE rows nearest each boundary.
inline std::vector<ConstraintRow> boundary_constraint_rows(const GridSpec& grid,
                                                           const BoundaryConfig& bc) {
    const int n = grid.n_nodes;
    const Field xs = grid.coordinates();
    std::vector<ConstraintRow> rows;

    auto derivative_row = [&](int row, int first_node, int npts, int m, double z) {
        auto w = fd_weights(z,
                            std::span<const double>(&xs[static_cast<std::size_t>(first_node)],
                                                    static_cast<std::size_t>(npts)),
                            m);
        ConstraintRow c{row, {}};
        for (int q = 0; q < npts; ++q)
            c.entries.emplace_back(first_node + q, w[static_cast<std::size_t>(q)]);
        rows.push_back(std::move(c));
    };

    rows.push_back(ConstraintRow{0, {{0, 1.0}}});                 // u(0) = 0
    if (bc.left_ux) derivative_row(1, 0, 3, 1, 0.0);              // u_x(0) = 0
    rows.push_back(ConstraintRow{n - 1, {{n - 1, 1.0}}});         // u(L) = 0
    derivative_row(n - 2, n - 3, 3, 1, grid.length);              // u_x(L) = 0
    derivative_row(n - 3, n - 4, 4, 2, grid.length);              // u_xx(L) = 0
    if (bc.right_uxxx) derivative_row(n - 4, n - 5, 5, 3, grid.length);  // u_xxx(L) = 0
    return rows;
}

// All operators one trajectory needs, immutable after construction.
struct OperatorSet {
    GridSpec grid;
    BoundaryConfig bc;
    int accuracy = 2;
    BandedOperator d1;
    BandedOperator d2;
    BandedOperator d3;
    std::optional<BandedOperator> d5;
    std::vector<ConstraintRow> constraints;
};

inline OperatorSet make_operator_set(const GridSpec& grid, double eps, int accuracy = 2) {
    OperatorSet ops;
    ops.grid = grid;
    ops.bc = BoundaryConfig::for_eps(eps);
    ops.accuracy = accuracy;
    ops.d1 = d_op(grid, 1, ops.bc, accuracy);
    ops.d2 = derivative_matrix(grid, 2, accuracy, ops.bc);
    ops.d3 = d_op(grid, 3, ops.bc, accuracy);
    if (eps > 0.0) ops.d5 = d_op(grid, 5, ops.bc, accuracy);
    ops.constraints = boundary_constraint_rows(grid, ops.bc);
    return ops;
}

} // namespace gkdv

#endif
