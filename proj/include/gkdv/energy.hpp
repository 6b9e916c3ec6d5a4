#ifndef GKDV_ENERGY_HPP
#define GKDV_ENERGY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gkdv/model.hpp"

namespace gkdv {

// Every functional the a priori estimates touch, evaluated at one time
// level, plus running trapezoid-in-t integrals of the dissipation terms.
struct EnergyRecord {
    double t = 0.0;
    double l2_sq = 0.0;     // ||u||^2
    double w1 = 0.0;        // ((1+x), u^2)
    double w2 = 0.0;        // ((1+x)^2, u^2)
    double h1x = 0.0;       // ||u_x||^2
    double w1x = 0.0;       // ||(1+x)^{1/2} u_x||^2
    double trace0 = 0.0;    // u_xx(0,t)^2
    double ut_w1 = 0.0;     // ((1+x), u_t^2)
    double ut_l2 = 0.0;     // ||u_t||^2
    double sup_u_sq = 0.0;  // sup_x u^2

    double int_eps_trace0 = 0.0;  // int eps * u_xx(0)^2
    double int_h1x = 0.0;         // int ||u_x||^2
    double int_w1x = 0.0;         // int ||(1+x)^{1/2} u_x||^2
    double int_eps_uxx = 0.0;     // int eps * ||u_xx||^2
    double int_uxt = 0.0;         // int ||u_xt||^2

    // Extra diagnostics, not part of the CSV schema.
    double uxx_l2_sq = 0.0;       // ||u_xx||^2
    double w1xx = 0.0;            // ||(1+x)^{1/2} u_xx||^2
    double int_eps_w1xx = 0.0;    // int eps * ||(1+x)^{1/2} u_xx||^2

    void check_monotone() const {
        if (!(l2_sq <= w1 * (1.0 + 1e-13) && w1 <= w2 * (1.0 + 1e-13)))
            throw ShapeError("EnergyRecord: weight monotonicity l2 <= w1 <= w2 violated");
    }
};

// Appends records along a trajectory, extending the cumulative integrals
// by trapezoid in t.
class EnergyLedger {
public:
    EnergyLedger(const SolverParams& params, const OperatorSet& ops)
        : params_(params), ops_(&ops) {}

    EnergyRecord record(const FieldState& state, const SourceFn* source = nullptr) {
        const GridSpec& grid = ops_->grid;
        EnergyRecord r;
        r.t = state.t;
        r.l2_sq = weighted_inner(state.u, state.u, 0, grid);
        r.w1 = weighted_inner(state.u, state.u, 1, grid);
        r.w2 = weighted_inner(state.u, state.u, 2, grid);

        Field ux = ops_->d1.apply(state.u);
        r.h1x = weighted_inner(ux, ux, 0, grid);
        r.w1x = weighted_inner(ux, ux, 1, grid);

        Field uxx = ops_->d2.apply(state.u);
        r.uxx_l2_sq = weighted_inner(uxx, uxx, 0, grid);
        r.w1xx = weighted_inner(uxx, uxx, 1, grid);

        const double tr = boundary_trace_uxx(state.u, grid);
        r.trace0 = tr * tr;

        Field ut = u_t_residual(state, params_, *ops_, source);
        r.ut_w1 = weighted_inner(ut, ut, 1, grid);
        r.ut_l2 = weighted_inner(ut, ut, 0, grid);
        Field uxt = ops_->d1.apply(ut);
        const double uxt_l2 = weighted_inner(uxt, uxt, 0, grid);

        const double s = sup_norm(state.u);
        r.sup_u_sq = s * s;

        if (have_prev_) {
            const double h = 0.5 * (r.t - prev_.t);
            r.int_eps_trace0 = prev_.int_eps_trace0 + h * params_.eps * (prev_.trace0 + r.trace0);
            r.int_h1x = prev_.int_h1x + h * (prev_.h1x + r.h1x);
            r.int_w1x = prev_.int_w1x + h * (prev_.w1x + r.w1x);
            r.int_eps_uxx = prev_.int_eps_uxx + h * params_.eps * (prev_.uxx_l2_sq + r.uxx_l2_sq);
            r.int_eps_w1xx = prev_.int_eps_w1xx + h * params_.eps * (prev_.w1xx + r.w1xx);
            r.int_uxt = prev_.int_uxt + h * (prev_uxt_l2_ + uxt_l2);
        }
        prev_ = r;
        prev_uxt_l2_ = uxt_l2;
        have_prev_ = true;
        r.check_monotone();
        return r;
    }

private:
    SolverParams params_;
    const OperatorSet* ops_;
    EnergyRecord prev_;
    double prev_uxt_l2_ = 0.0;
    bool have_prev_ = false;
};

// C1 of Estimate II: 1 + T ||u0||^4 (||u0|| the L2 norm, not its square).
inline double c1_constant(double l2_u0, double T) {
    if (l2_u0 < 0.0 || T < 0.0) throw ConfigError("c1_constant: inputs must be nonnegative");
    const double s = l2_u0 * l2_u0;
    return 1.0 + T * s * s;
}

// C2 of Estimate III: 1 + 2 C1^2 T ||u0||^2 ((1+x)^2, u0^2).
inline double c2_constant(double l2_u0, double w2_u0, double T, double C1) {
    if (l2_u0 < 0.0 || w2_u0 < 0.0 || T < 0.0 || C1 < 0.0)
        throw ConfigError("c2_constant: inputs must be nonnegative");
    return 1.0 + 2.0 * C1 * C1 * T * l2_u0 * l2_u0 * w2_u0;
}

struct EstimateEntry {
    std::string name;
    double lhs = 0.0;        // worst-case left-hand value
    double rhs = 0.0;        // bound at the worst time
    double margin = 1.0;     // min over t of (rhs - lhs)/rhs; 1 when both vanish
    double worst_time = 0.0;
    bool pass = true;
    double aux = 0.0;        // estimate-specific extra (see each checker)
};

struct EstimateReport {
    std::vector<EstimateEntry> entries;
    double C1 = 0.0;
    double C2 = 0.0;

    bool all_pass() const {
        return std::all_of(entries.begin(), entries.end(),
                           [](const EstimateEntry& e) { return e.pass; });
    }
};

namespace detail {

inline double margin_of(double lhs, double rhs) {
    if (rhs == 0.0) return lhs == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    return (rhs - lhs) / rhs;
}

} // namespace detail

// Estimate I. eps>0: the identity ||u||^2(t) + eps int |u_xx(0)|^2 = ||u0||^2,
// checked in relative terms. eps=0: non-increase of ||u||^2 per record, with
// slack tol_step_rel * ||u0||^2. aux carries the worst raw residual/increase.
inline EstimateEntry check_estimate_I(const std::vector<EnergyRecord>& records,
                                      const SolverParams& params, double l2_u0_sq,
                                      double identity_tol = 1e-3,
                                      double tol_step_rel = 1e-8) {
    EstimateEntry e;
    e.name = "estimate_I";
    if (params.eps > 0.0) {
        double worst = 0.0, worst_t = 0.0;
        for (const auto& r : records) {
            const double raw = std::fabs(r.l2_sq + r.int_eps_trace0 - l2_u0_sq);
            const double rel = l2_u0_sq > 0.0 ? raw / l2_u0_sq : raw;
            if (rel > worst) {
                worst = rel;
                worst_t = r.t;
            }
        }
        e.lhs = worst;
        e.rhs = identity_tol;
        e.margin = detail::margin_of(worst, identity_tol);
        e.worst_time = worst_t;
        e.pass = worst <= identity_tol;
        e.aux = worst * l2_u0_sq;
    } else {
        const double allowed = tol_step_rel * l2_u0_sq;
        double worst = -std::numeric_limits<double>::infinity(), worst_t = 0.0;
        for (std::size_t i = 1; i < records.size(); ++i) {
            const double inc = records[i].l2_sq - records[i - 1].l2_sq;
            if (inc > worst) {
                worst = inc;
                worst_t = records[i].t;
            }
        }
        if (records.size() < 2) worst = 0.0;
        e.lhs = worst;
        e.rhs = allowed;
        e.margin = allowed > 0.0 ? (allowed - worst) / allowed : (worst <= 0.0 ? 1.0 : -1.0);
        e.worst_time = worst_t;
        e.pass = worst <= allowed;
        e.aux = worst;
    }
    return e;
}

// Estimate II: w1(t) + int[eps u_xx(0)^2 + ||u_x||^2 + 5 eps ||u_xx||^2]
// <= C1 ((1+x), u0^2). aux reports the alternative margin with the
// pre-absorption coefficient 3 on ||u_x||^2.
inline EstimateEntry check_estimate_II(const std::vector<EnergyRecord>& records,
                                       const SolverParams& params, double w1_u0, double C1) {
    (void)params;
    EstimateEntry e;
    e.name = "estimate_II";
    const double bound = C1 * w1_u0;
    e.rhs = bound;
    double worst_margin = 1.0, worst_alt = 1.0;
    for (const auto& r : records) {
        const double lhs = r.w1 + r.int_eps_trace0 + r.int_h1x + 5.0 * r.int_eps_uxx;
        const double lhs_alt = r.w1 + r.int_eps_trace0 + 3.0 * r.int_h1x + 5.0 * r.int_eps_uxx;
        const double m = detail::margin_of(lhs, bound);
        if (m < worst_margin) {
            worst_margin = m;
            e.lhs = lhs;
            e.worst_time = r.t;
        }
        worst_alt = std::min(worst_alt, detail::margin_of(lhs_alt, bound));
    }
    e.margin = worst_margin;
    e.pass = worst_margin >= 0.0;
    e.aux = worst_alt;
    return e;
}

// Estimate III: w2(t) + int[2 ||(1+x)^{1/2}u_x||^2 + 10 eps ||(1+x)^{1/2}u_xx||^2]
// <= C2 ((1+x)^2, u0^2).
inline EstimateEntry check_estimate_III(const std::vector<EnergyRecord>& records,
                                        const SolverParams& params, double w2_u0, double C2) {
    (void)params;
    EstimateEntry e;
    e.name = "estimate_III";
    const double bound = C2 * w2_u0;
    e.rhs = bound;
    double worst_margin = 1.0;
    for (const auto& r : records) {
        const double lhs = r.w2 + 2.0 * r.int_w1x + 10.0 * r.int_eps_w1xx;
        const double m = detail::margin_of(lhs, bound);
        if (m < worst_margin) {
            worst_margin = m;
            e.lhs = lhs;
            e.worst_time = r.t;
        }
    }
    e.margin = worst_margin;
    e.pass = worst_margin >= 0.0;
    return e;
}

// Estimate IV: ((1+x), u_t^2)(t) stays below the Gronwall envelope
// exp(int_0^t g) * ((1+x), u_t^2)(0) with the explicit rate
//   g = 4 w1 (||u||^2 + ||(1+x)^{1/2}u_x||^2) + 2 (||u0||^2 + ||u_x||^2)
// assembled from the records. Compared in log space; the envelope can be
// astronomically large. aux carries the worst log-gap.
inline EstimateEntry check_estimate_IV(const std::vector<EnergyRecord>& records,
                                       const SolverParams& params, double ut0_w1,
                                       double log_slack = 1e-6) {
    (void)params;
    EstimateEntry e;
    e.name = "estimate_IV";
    e.rhs = ut0_w1;
    if (records.empty()) return e;
    const double l2_u0_sq = records.front().l2_sq;
    double G = 0.0;  // int_0^t g
    double prev_g = 0.0, prev_t = records.front().t;
    double worst_gap = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (const auto& r : records) {
        const double g = 4.0 * r.w1 * (r.l2_sq + r.w1x) + 2.0 * (l2_u0_sq + r.h1x);
        if (!first) G += 0.5 * (r.t - prev_t) * (prev_g + g);
        prev_g = g;
        prev_t = r.t;
        first = false;
        if (ut0_w1 == 0.0) {
            if (r.ut_w1 > 1e-20) {
                e.pass = false;
                e.lhs = r.ut_w1;
                e.worst_time = r.t;
            }
            continue;
        }
        const double gap = std::log(std::max(r.ut_w1, 1e-300) / ut0_w1) - G;  // <= 0 wanted
        if (gap > worst_gap) {
            worst_gap = gap;
            e.lhs = r.ut_w1;
            e.worst_time = r.t;
        }
    }
    if (ut0_w1 > 0.0) {
        e.pass = worst_gap <= log_slack;
        e.margin = -worst_gap;
        e.aux = worst_gap;
    }
    return e;
}

// Test function with analytically sampled derivatives, vanishing with its
// first two derivatives at x=0 and decaying toward x=L.
struct TestFunction {
    Field phi;
    Field phi_x;
    Field phi_xx;
};

// phi(x) = x^3 e^{-x}; phi(0)=phi'(0)=phi''(0)=0.
inline TestFunction cubic_exp_test_function(const GridSpec& grid) {
    TestFunction tf;
    tf.phi = sample(grid, [](double x) { return x * x * x * std::exp(-x); });
    tf.phi_x = sample(grid, [](double x) { return (3.0 * x * x - x * x * x) * std::exp(-x); });
    tf.phi_xx = sample(grid, [](double x) { return (6.0 * x - 6.0 * x * x + x * x * x) * std::exp(-x); });
    return tf;
}

// Max over the given states of the weak-formulation residual
//   (u_t, phi) + (u_x, phi_xx) - (u^{k+1}, phi_x)/(k+1).
inline double weak_residual(const std::vector<FieldState>& states, const TestFunction& tf,
                            const SolverParams& params, const OperatorSet& ops) {
    const GridSpec& grid = ops.grid;
    require_on_grid(tf.phi, grid, "weak_residual(phi)");
    const double scale = 1.0 + sup_norm(tf.phi) + sup_norm(tf.phi_x) + sup_norm(tf.phi_xx);
    if (std::fabs(tf.phi[0]) > 1e-12 * scale || std::fabs(tf.phi_x[0]) > 1e-12 * scale ||
        std::fabs(tf.phi_xx[0]) > 1e-12 * scale)
        throw ConfigError("weak_residual: test function must satisfy phi(0)=phi_x(0)=phi_xx(0)=0");
    const std::size_t n = tf.phi.size();
    if (std::fabs(tf.phi[n - 1]) > 1e-6 * scale)
        throw ConfigError("weak_residual: test function must vanish near x=L");

    double worst = 0.0;
    for (const auto& s : states) {
        Field ut = u_t_residual(s, params, ops);
        Field ux = ops.d1.apply(s.u);
        Field fk = s.u;
        for (std::size_t j = 0; j < n; ++j) {
            double p = s.u[j];
            for (int m = 0; m < params.k; ++m) p *= s.u[j];
            fk[j] = p;
        }
        const double r = weighted_inner(ut, tf.phi, 0, grid) +
                         weighted_inner(ux, tf.phi_xx, 0, grid) -
                         weighted_inner(fk, tf.phi_x, 0, grid) / static_cast<double>(params.k + 1);
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

// Discrete check of the half-line interpolation inequalities
//   ||u||_L4 <= 2^{1/2} ||u_x||^{1/2} ||u||^{1/2}
//   ||u||_L8 <= 4^{3/4} ||u_x||^{3/4} ||u||^{1/4}
//   sup u^2  <= 2 ||u|| ||u_x||
// with discretization slack 1 + 10 dx.
struct InterpolationReport {
    double l4_lhs = 0.0, l4_rhs = 0.0;
    double l8_lhs = 0.0, l8_rhs = 0.0;
    double sup_lhs = 0.0, sup_rhs = 0.0;
    double slack = 1.0;
    bool pass = true;
};

inline InterpolationReport check_interpolation_inequalities(std::span<const double> u,
                                                            const GridSpec& grid) {
    require_left_bc(u, "check_interpolation_inequalities");
    InterpolationReport rep;
    rep.slack = 1.0 + 10.0 * grid.dx;

    const double l2 = std::sqrt(l2_norm_sq(u, grid));
    BandedOperator d1 = derivative_matrix(grid, 1, 2);
    Field ux = d1.apply(u);
    const double h1 = std::sqrt(l2_norm_sq(ux, grid));
    const double s = sup_norm(u);

    rep.l4_lhs = lp_norm(u, 4.0, grid);
    rep.l4_rhs = std::sqrt(2.0) * std::sqrt(h1) * std::sqrt(l2) * rep.slack;
    rep.l8_lhs = lp_norm(u, 8.0, grid);
    rep.l8_rhs = std::pow(4.0, 0.75) * std::pow(h1, 0.75) * std::pow(l2, 0.25) * rep.slack;
    rep.sup_lhs = s * s;
    rep.sup_rhs = 2.0 * l2 * h1 * rep.slack;

    rep.pass = rep.l4_lhs <= rep.l4_rhs && rep.l8_lhs <= rep.l8_rhs && rep.sup_lhs <= rep.sup_rhs;
    return rep;
}

} // namespace gkdv

#endif
