#ifndef GKDV_MODEL_HPP
#define GKDV_MODEL_HPP

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "gkdv/grid.hpp"
#include "gkdv/operators.hpp"

namespace gkdv {

// u_t + u^k u_x + u_xxx - eps * u_xxxxx = 0 on (0,T) x (0,L).
struct SolverParams {
    int k = 1;            // nonlinearity exponent; k=3 is local-theory regime
    double eps = 0.0;     // fifth-order regularization strength, in [0,1]
    double dt = 1e-4;
    double T = 1.0;
    double picard_tol = 1e-10;
    int picard_max_iters = 50;
    int stencil_order = 2;     // 2 or 4
    double compat_tol = 1e-6;  // allowed |u0_x(0)| when eps > 0

    void validate() const {
        if (k < 1 || k > 3)
            throw ConfigError("SolverParams: k must be 1, 2 or 3 (k=4 is the critical "
                              "case with finite-time blow-up and is not supported)");
        if (!(eps >= 0.0 && eps <= 1.0)) throw ConfigError("SolverParams: eps must be in [0,1]");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("SolverParams: dt must be positive");
        if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("SolverParams: T must be positive");
        if (dt >= T) throw ConfigError("SolverParams: dt must be smaller than T");
        if (!(picard_tol > 0.0)) throw ConfigError("SolverParams: picard_tol must be positive");
        if (picard_max_iters < 1) throw ConfigError("SolverParams: picard_max_iters must be >= 1");
        if (stencil_order != 2 && stencil_order != 4)
            throw ConfigError("SolverParams: stencil_order must be 2 or 4");
    }

    bool local_theory_regime() const { return k == 3; }
};

struct FieldState {
    Field u;
    double t = 0.0;
};

// Optional manufactured source s(x,t) added to the right-hand side.
using SourceFn = std::function<double(double x, double t)>;

inline void require_left_bc(std::span<const double> u, const char* what) {
    const double scale = 1.0 + sup_norm(u);
    if (std::fabs(u[0]) > 1e-12 * scale)
        throw ConfigError(std::string(what) + ": field violates the boundary condition u(0)=0");
}

// Conservative flux u^(k+1)/(k+1); its x-divergence equals u^k u_x.
inline Field nonlinear_flux(std::span<const double> u, int k) {
    if (k < 1 || k > 3) throw ConfigError("nonlinear_flux: k must be 1, 2 or 3");
    Field f(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        double p = u[j];
        for (int m = 0; m < k; ++m) p *= u[j];
        f[j] = p / static_cast<double>(k + 1);
    }
    return f;
}

// u_t = -d/dx(u^(k+1)/(k+1)) - u_xxx + eps * u_xxxxx [+ source].
inline Field rhs(const FieldState& state, const SolverParams& params, const OperatorSet& ops,
                 const SourceFn* source = nullptr) {
    require_on_grid(state.u, ops.grid, "rhs");
    require_left_bc(state.u, "rhs");
    const std::size_t n = state.u.size();

    Field flux = nonlinear_flux(state.u, params.k);
    Field out = ops.d1.apply(flux);
    Field d3u = ops.d3.apply(state.u);
    Field d5u;
    if (params.eps > 0.0) {
        if (!ops.d5) throw ConfigError("rhs: operator set lacks the fifth-derivative operator");
        d5u = ops.d5->apply(state.u);
    }
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = -out[j] - d3u[j];
        if (params.eps > 0.0) out[j] += params.eps * d5u[j];
        if (source) out[j] += (*source)(ops.grid.x(static_cast<int>(j)), state.t);
    }
    if (!all_finite(out))
        throw DivergenceError("rhs: non-finite value in the PDE right-hand side", state.t);
    return out;
}

// The PDE-residual form of u_t; identical to rhs, named for the energy
// bookkeeping which treats it as the time derivative along a trajectory.
inline Field u_t_residual(const FieldState& state, const SolverParams& params,
                          const OperatorSet& ops, const SourceFn* source = nullptr) {
    return rhs(state, params, ops, source);
}

} // namespace gkdv

#endif
