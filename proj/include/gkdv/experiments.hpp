#ifndef GKDV_EXPERIMENTS_HPP
#define GKDV_EXPERIMENTS_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gkdv/stepper.hpp"

namespace gkdv {

// ---------------------------------------------------------------------------
// Traveling-wave oracles
// ---------------------------------------------------------------------------

// Closed-form solitary waves used as validation oracles:
//   k=1: u(x,t) = 12 c^2 sech^2(c (x - 4c^2 t - x0))
//   k=2: u(x,t) = sqrt(6c) sech(sqrt(c) (x - c t - x0))
inline double soliton_profile(int k, double c, double x0, double x, double t) {
    if (k == 1) {
        const double s = 1.0 / std::cosh(c * (x - 4.0 * c * c * t - x0));
        return 12.0 * c * c * s * s;
    }
    if (k == 2) {
        const double rc = std::sqrt(c);
        return std::sqrt(6.0 * c) / std::cosh(rc * (x - c * t - x0));
    }
    throw ConfigError("soliton_profile: closed forms exist only for k=1 and k=2");
}

inline double soliton_speed(int k, double c) { return k == 1 ? 4.0 * c * c : c; }

inline double soliton_width(int k, double c) { return k == 1 ? 1.0 / c : 1.0 / std::sqrt(c); }

// ---------------------------------------------------------------------------
// Vanishing-regularization sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    double eps = 0.0;
    double terminal_l2_dist = 0.0;   // |u_eps - u_0|_L2 at t=T
    double sup_l2_dist = 0.0;        // max over snapshot times
    double max_sqrt_eps_uxx = 0.0;   // max_t eps^{1/2} ||u_xx||(t)
    bool failed = false;
    std::string failure;
};

struct SweepResult {
    std::vector<SweepRow> rows;      // eps strictly decreasing
    bool monotone_convergent = false;
    double uniform_uxx_bound = 0.0;  // max over the sweep of eps^{1/2}||u_xx||
};

inline SweepResult eps_sweep(const Field& u0, const SolverParams& params, const GridSpec& grid,
                             const std::vector<double>& eps_list, int snapshot_cadence = 10) {
    if (eps_list.empty()) throw ConfigError("eps_sweep: empty eps list");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!(eps_list[i] > 0.0 && eps_list[i] <= 1.0))
            throw ConfigError("eps_sweep: all eps must lie in (0,1]");
        if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
            throw ConfigError("eps_sweep: eps list must be strictly decreasing");
    }

    SolveOptions opt;
    opt.snapshot_cadence = snapshot_cadence;
    opt.energy_cadence = snapshot_cadence;

    SolverParams ref_params = params;
    ref_params.eps = 0.0;
    Trajectory ref = solve_ibvp(u0, ref_params, grid, opt);

    SweepResult result;
    for (double eps : eps_list) {
        SweepRow row;
        row.eps = eps;
        SolverParams p = params;
        p.eps = eps;
        try {
            Trajectory tr = solve_ibvp(u0, p, grid, opt);
            const std::size_t m = std::min(tr.snapshots.size(), ref.snapshots.size());
            Field diff(u0.size());
            for (std::size_t s = 0; s < m; ++s) {
                for (std::size_t j = 0; j < diff.size(); ++j)
                    diff[j] = tr.snapshots[s].u[j] - ref.snapshots[s].u[j];
                const double d = std::sqrt(l2_norm_sq(diff, grid));
                row.sup_l2_dist = std::max(row.sup_l2_dist, d);
                if (s == m - 1) row.terminal_l2_dist = d;
            }
            for (const auto& r : tr.records)
                row.max_sqrt_eps_uxx =
                    std::max(row.max_sqrt_eps_uxx, std::sqrt(eps) * std::sqrt(r.uxx_l2_sq));
        } catch (const std::exception& e) {
            row.failed = true;
            row.failure = e.what();
        }
        result.rows.push_back(row);
    }

    result.monotone_convergent = true;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (result.rows[i].failed) {
            result.monotone_convergent = false;
            break;
        }
        result.uniform_uxx_bound = std::max(result.uniform_uxx_bound, result.rows[i].max_sqrt_eps_uxx);
        if (i > 0 && !(result.rows[i].sup_l2_dist < result.rows[i - 1].sup_l2_dist))
            result.monotone_convergent = false;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Two-trajectory uniqueness / Gronwall experiment (k = 2)
// ---------------------------------------------------------------------------

struct GronwallResult {
    std::vector<double> times;
    std::vector<double> w1_z;        // ((1+x), z^2)(t), z = u1 - u2
    double fitted_rate = 0.0;        // log-linear slope of w1_z
    double bound_rate = 0.0;         // max_t of the explicit Gronwall rate
    double max_w1_z = 0.0;
    bool zero_perturbation = false;
    bool pass = false;
};

inline GronwallResult gronwall_uniqueness_test(const Field& u0, const Field& perturbation,
                                               const SolverParams& params, const GridSpec& grid,
                                               int cadence = 10) {
    if (params.k != 2)
        throw ConfigError("gronwall_uniqueness_test: the uniqueness argument is run with k=2");
    params.validate();
    require_on_grid(u0, grid, "gronwall_uniqueness_test");
    require_on_grid(perturbation, grid, "gronwall_uniqueness_test(perturbation)");

    Field u0b(u0.size());
    for (std::size_t j = 0; j < u0.size(); ++j) u0b[j] = u0[j] + perturbation[j];
    u0b[0] = 0.0;

    OperatorSet ops = make_operator_set(grid, params.eps, params.stencil_order);
    CrankNicolsonStepper stepper(ops, params);
    FieldState a{u0, 0.0}, b{u0b, 0.0};

    GronwallResult res;
    Field z(u0.size());
    auto push = [&](const FieldState& s1, const FieldState& s2) {
        for (std::size_t j = 0; j < z.size(); ++j) z[j] = s1.u[j] - s2.u[j];
        const double w = weighted_inner(z, z, 1, grid);
        res.times.push_back(s1.t);
        res.w1_z.push_back(w);
        res.max_w1_z = std::max(res.max_w1_z, w);
        Field u1x = ops.d1.apply(s1.u);
        Field u2x = ops.d1.apply(s2.u);
        const double s1s = sup_norm(s1.u), s2s = sup_norm(s2.u);
        const double sx1 = sup_norm(u1x), sx2 = sup_norm(u2x);
        // explicit coefficients of the displayed difference estimate:
        // (2/3)(sup u1^2 + sup u2^2) + (4/3) sup[u1^2+u2^2+u1x^2+u2x^2]
        const double g = (2.0 / 3.0) * (s1s * s1s + s2s * s2s) +
                         (4.0 / 3.0) * (s1s * s1s + s2s * s2s + sx1 * sx1 + sx2 * sx2);
        res.bound_rate = std::max(res.bound_rate, g);
    };

    push(a, b);
    const long nsteps = std::lround(params.T / params.dt);
    for (long s = 1; s <= nsteps; ++s) {
        a = stepper.step(a);
        b = stepper.step(b);
        if (s % cadence == 0 || s == nsteps) push(a, b);
    }

    res.zero_perturbation = res.max_w1_z <= 1e-12;
    if (res.zero_perturbation) {
        res.fitted_rate = -std::numeric_limits<double>::infinity();
        res.pass = true;
        return res;
    }

    // least-squares slope of log w1_z over records with positive values
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        if (res.w1_z[i] <= 0.0) continue;
        const double x = res.times[i], y = std::log(res.w1_z[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m >= 2 && sxx * m - sx * sx > 0.0)
        res.fitted_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    res.pass = res.fitted_rate <= res.bound_rate;
    return res;
}

// ---------------------------------------------------------------------------
// Soliton benchmark
// ---------------------------------------------------------------------------

struct SolitonReport {
    double l2_error = 0.0;       // terminal L2 error at base resolution
    double sup_error = 0.0;
    double l2_error_coarse = 0.0;
    double order = 0.0;          // log2(coarse error / base error)
    double l2_drift_rel = 0.0;   // max relative departure of ||u||^2 from t=0
    double boundary_mass_max = 0.0;
};

namespace detail {

inline double terminal_soliton_error(int k, double c, double x0, const SolverParams& params,
                                     const GridSpec& grid, double* sup_err, double* drift,
                                     double* bmass) {
    Field u0 = sample(grid, [&](double x) { return soliton_profile(k, c, x0, x, 0.0); });
    u0[0] = 0.0;
    SolveOptions opt;
    opt.energy_cadence = 20;
    opt.snapshot_cadence = 1000000;  // only t=0 and t=T needed
    Trajectory tr = solve_ibvp(u0, params, grid, opt);
    const FieldState& fin = tr.final_state();
    Field err(u0.size());
    double smax = 0.0;
    for (std::size_t j = 0; j < err.size(); ++j) {
        const double exact = soliton_profile(k, c, x0, grid.x(static_cast<int>(j)), fin.t);
        err[j] = fin.u[j] - exact;
        smax = std::max(smax, std::fabs(err[j]));
    }
    if (sup_err) *sup_err = smax;
    if (drift) {
        const double e0 = tr.records.front().l2_sq;
        double d = 0.0;
        for (const auto& r : tr.records) d = std::max(d, std::fabs(r.l2_sq - e0) / e0);
        *drift = d;
    }
    if (bmass) *bmass = tr.boundary_mass_max;
    return std::sqrt(l2_norm_sq(err, grid));
}

} // namespace detail

inline SolitonReport soliton_benchmark(int k, double c, double x0, const SolverParams& params,
                                       const GridSpec& grid) {
    if (k != 1 && k != 2) throw ConfigError("soliton_benchmark: k must be 1 or 2");
    const double width = soliton_width(k, c);
    const double x_final = x0 + soliton_speed(k, c) * params.T;
    if (x0 < 5.0 * width || x_final > grid.length - 5.0 * width)
        throw ConfigError("soliton_benchmark: wave runs within five widths of a boundary");

    SolverParams p = params;
    p.k = k;

    SolitonReport rep;
    rep.l2_error = detail::terminal_soliton_error(k, c, x0, p, grid, &rep.sup_error,
                                                  &rep.l2_drift_rel, &rep.boundary_mass_max);

    // coarse companion run: dx and dt doubled
    GridSpec coarse = build_grid(grid.length, (grid.n_nodes - 1) / 2 + 1);
    SolverParams pc = p;
    pc.dt = 2.0 * p.dt;
    rep.l2_error_coarse =
        detail::terminal_soliton_error(k, c, x0, pc, coarse, nullptr, nullptr, nullptr);
    rep.order = std::log2(rep.l2_error_coarse / rep.l2_error);
    return rep;
}

// ---------------------------------------------------------------------------
// Method of manufactured solutions
// ---------------------------------------------------------------------------

struct MmsLevel {
    int n_nodes = 0;
    double dt = 0.0;
    double l2_error = 0.0;
};

struct MmsReport {
    std::vector<MmsLevel> levels;
    double min_order = 0.0;  // smallest observed order between consecutive levels
};

// Manufactured solution u(x,t) = g(x) sin(t) with
//   g(x) = x e^{-x}   when eps = 0 (u_x(0,t) is unconstrained)
//   g(x) = x^2 e^{-x} when eps > 0 (so u_x(0,t) = 0 holds too)
// and source s = u_t + u^k u_x + u_xxx - eps u_xxxxx computed in closed form.
inline MmsReport manufactured_solution_test(const SolverParams& params, double length = 20.0,
                                            int base_nodes = 257, double base_dt = 2e-3,
                                            int n_levels = 3) {
    params.validate();
    const bool quadratic = params.eps > 0.0;

    auto g = [&](double x, int deriv) {
        const double e = std::exp(-x);
        if (!quadratic) {
            switch (deriv) {
                case 0: return x * e;
                case 1: return (1.0 - x) * e;
                case 3: return (3.0 - x) * e;
                case 5: return (5.0 - x) * e;
            }
        } else {
            switch (deriv) {
                case 0: return x * x * e;
                case 1: return (2.0 * x - x * x) * e;
                case 3: return (-6.0 + 6.0 * x - x * x) * e;
                case 5: return (-20.0 + 10.0 * x - x * x) * e;
            }
        }
        throw ConfigError("manufactured_solution_test: unsupported derivative");
    };

    const int k = params.k;
    SourceFn source = [g, k, eps = params.eps](double x, double t) {
        const double h = std::sin(t), hp = std::cos(t);
        const double g0 = g(x, 0);
        double gk = 1.0;
        for (int m = 0; m < k; ++m) gk *= g0;
        double hk = 1.0;
        for (int m = 0; m < k; ++m) hk *= h;
        return g0 * hp + gk * g(x, 1) * hk * h + g(x, 3) * h - eps * g(x, 5) * h;
    };

    MmsReport rep;
    int n = base_nodes;
    double dt = base_dt;
    for (int lev = 0; lev < n_levels; ++lev) {
        GridSpec grid = build_grid(length, n);
        Field u0(static_cast<std::size_t>(n), 0.0);  // u(x,0) = g(x) sin(0) = 0
        SolveOptions opt;
        opt.energy_cadence = 1000000;
        opt.snapshot_cadence = 1000000;
        SolverParams p = params;
        p.dt = dt;
        opt.source = source;
        Trajectory tr = solve_ibvp(u0, p, grid, opt);
        const FieldState& fin = tr.final_state();
        Field err(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            err[static_cast<std::size_t>(j)] =
                fin.u[static_cast<std::size_t>(j)] - g(grid.x(j), 0) * std::sin(fin.t);
        rep.levels.push_back(MmsLevel{n, dt, std::sqrt(l2_norm_sq(err, grid))});
        n = 2 * (n - 1) + 1;
        dt *= 0.5;
    }

    rep.min_order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rep.levels.size(); ++i)
        rep.min_order = std::min(rep.min_order,
                                 std::log2(rep.levels[i - 1].l2_error / rep.levels[i].l2_error));
    return rep;
}

} // namespace gkdv

#endif
