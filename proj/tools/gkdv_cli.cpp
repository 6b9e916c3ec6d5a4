// Command-line driver: runs the half-line solver and its verification
// experiments from a flat key=value config file.
//
// Exit codes: 0 success, 1 usage/config error, 2 solver failure,
// 3 a verification criterion failed.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "gkdv/gkdv.hpp"

namespace fs = std::filesystem;
using namespace gkdv;

namespace {

struct Cli {
    std::string config_path;
    std::string out_dir = ".";
    bool quiet = false;
};

RunConfig load_config(const Cli& cli) {
    if (cli.config_path.empty()) return RunConfig{};
    std::ifstream in(cli.config_path);
    if (!in) throw ConfigError("cannot open config file '" + cli.config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << text;
}

void say(const Cli& cli, const std::string& line) {
    if (!cli.quiet) std::cout << line << "\n";
}

std::string header_lines(const RunConfig& cfg, const InitialData& data) {
    std::ostringstream os;
    os << "k = " << cfg.k << ", eps = " << format_real(cfg.eps) << ", L = " << cfg.L
       << ", n_nodes = " << cfg.n_nodes << ", dt = " << format_real(cfg.dt)
       << ", T = " << format_real(cfg.T) << "\n";
    if (cfg.solver_params().local_theory_regime())
        os << "note: k = 3 runs in the local-theory regime; bounds are checked on [0,T] only\n";
    os << "initial data: " << cfg.data << ", node-0 clamp magnitude "
       << format_real(data.clamp_magnitude) << "\n";
    return os.str();
}

int run_solve(const Cli& cli, const RunConfig& cfg) {
    GridSpec grid = cfg.grid();
    SolverParams params = cfg.solver_params();
    InitialData data = initial_data(cfg, grid);

    SolveOptions opt;
    opt.energy_cadence = cfg.energy_cadence;
    opt.snapshot_cadence = cfg.snapshot_cadence;
    Trajectory tr = solve_ibvp(data.u, params, grid, opt);

    const EnergyRecord& r0 = tr.records.front();
    const double l2_u0 = std::sqrt(r0.l2_sq);
    const double C1 = c1_constant(l2_u0, params.T);
    const double C2 = c2_constant(l2_u0, r0.w2, params.T, C1);

    EstimateReport report;
    report.C1 = C1;
    report.C2 = C2;
    report.entries.push_back(check_estimate_I(tr.records, params, r0.l2_sq));
    report.entries.push_back(check_estimate_II(tr.records, params, r0.w1, C1));
    report.entries.push_back(check_estimate_III(tr.records, params, r0.w2, C2));
    report.entries.push_back(check_estimate_IV(tr.records, params, r0.ut_w1));

    OperatorSet weak_ops = make_operator_set(grid, params.eps, params.stencil_order);
    std::string weak_line = "weak residual (phi = x^3 e^-x, over snapshots) = ";
    try {
        weak_line += format_real(
            weak_residual(tr.snapshots, cubic_exp_test_function(grid), params, weak_ops));
    } catch (const ConfigError& e) {
        weak_line += std::string("n/a (") + e.what() + ")";  // e.g. domain too short for phi
    }

    const fs::path out(cli.out_dir);
    emit_energy_csv(tr.records, (out / "energy.csv").string());
    emit_estimate_csv(report, (out / "estimates.csv").string());
    write_text(out / "config_echo.txt", echo_config(cfg));

    std::ostringstream sum;
    sum << header_lines(cfg, data);
    sum << "steps = " << std::lround(params.T / params.dt)
        << ", energy records = " << tr.records.size()
        << ", snapshots = " << tr.snapshots.size() << "\n";
    sum << "C1 = " << format_real(C1) << ", C2 = " << format_real(C2) << "\n";
    for (const auto& e : report.entries)
        sum << e.name << ": " << (e.pass ? "pass" : "FAIL") << " (margin " << format_real(e.margin)
            << ", worst t = " << format_real(e.worst_time) << ")\n";
    sum << weak_line << "\n";
    sum << "right-boundary mass fraction (max over records) = "
        << format_real(tr.boundary_mass_max) << "\n";
    sum << "final ||u||^2 = " << format_real(tr.records.back().l2_sq) << "\n";
    write_text(out / "summary.txt", sum.str());
    say(cli, sum.str());
    return report.all_pass() ? 0 : 3;
}

int run_eps_sweep(const Cli& cli, const RunConfig& cfg) {
    GridSpec grid = cfg.grid();
    InitialData data = initial_data(cfg, grid);
    SweepResult r =
        eps_sweep(data.u, cfg.solver_params(), grid, cfg.parsed_eps_list(), cfg.snapshot_cadence);

    std::ostringstream csv;
    csv << "eps,terminal_l2_dist,sup_l2_dist,max_sqrt_eps_uxx,failed\n";
    for (const auto& row : r.rows)
        csv << format_real(row.eps) << ',' << format_real(row.terminal_l2_dist) << ','
            << format_real(row.sup_l2_dist) << ',' << format_real(row.max_sqrt_eps_uxx) << ','
            << (row.failed ? 1 : 0) << "\n";
    write_text(fs::path(cli.out_dir) / "eps_sweep.csv", csv.str());

    std::ostringstream sum;
    sum << header_lines(cfg, data);
    for (const auto& row : r.rows) {
        sum << "eps = " << format_real(row.eps);
        if (row.failed)
            sum << ": FAILED (" << row.failure << ")\n";
        else
            sum << ": sup distance " << format_real(row.sup_l2_dist) << ", sqrt(eps)||u_xx|| <= "
                << format_real(row.max_sqrt_eps_uxx) << "\n";
    }
    sum << "monotone convergence toward eps = 0: " << (r.monotone_convergent ? "pass" : "FAIL")
        << "\n";
    sum << "uniform sqrt(eps)||u_xx|| bound = " << format_real(r.uniform_uxx_bound) << "\n";
    write_text(fs::path(cli.out_dir) / "summary.txt", sum.str());
    say(cli, sum.str());
    return r.monotone_convergent ? 0 : 3;
}

int run_gronwall(const Cli& cli, const RunConfig& cfg) {
    GridSpec grid = cfg.grid();
    InitialData data = initial_data(cfg, grid);
    Field pert(data.u.size());
    for (std::size_t j = 0; j < pert.size(); ++j) pert[j] = cfg.perturb_scale * data.u[j];
    pert[0] = 0.0;
    GronwallResult r =
        gronwall_uniqueness_test(data.u, pert, cfg.solver_params(), grid, cfg.snapshot_cadence);

    std::ostringstream csv;
    csv << "t,w1_z\n";
    for (std::size_t i = 0; i < r.times.size(); ++i)
        csv << format_real(r.times[i]) << ',' << format_real(r.w1_z[i]) << "\n";
    write_text(fs::path(cli.out_dir) / "gronwall.csv", csv.str());

    std::ostringstream sum;
    sum << header_lines(cfg, data);
    sum << "perturbation scale = " << format_real(cfg.perturb_scale) << "\n";
    sum << "max weighted difference w1_z = " << format_real(r.max_w1_z) << "\n";
    if (r.zero_perturbation)
        sum << "trajectories are identical to machine precision\n";
    else
        sum << "fitted growth rate " << format_real(r.fitted_rate) << " vs Gronwall bound "
            << format_real(r.bound_rate) << "\n";
    sum << "uniqueness bound: " << (r.pass ? "pass" : "FAIL") << "\n";
    write_text(fs::path(cli.out_dir) / "summary.txt", sum.str());
    say(cli, sum.str());
    return r.pass ? 0 : 3;
}

int run_soliton_bench(const Cli& cli, const RunConfig& cfg) {
    GridSpec grid = cfg.grid();
    SolitonReport rep =
        soliton_benchmark(cfg.k, cfg.data_c, cfg.data_x0, cfg.solver_params(), grid);

    std::ostringstream sum;
    sum << "k = " << cfg.k << ", c = " << format_real(cfg.data_c)
        << ", x0 = " << format_real(cfg.data_x0) << ", T = " << format_real(cfg.T) << "\n";
    sum << "terminal L2 error = " << format_real(rep.l2_error)
        << ", sup error = " << format_real(rep.sup_error) << "\n";
    sum << "coarse-run L2 error = " << format_real(rep.l2_error_coarse)
        << ", observed order = " << format_real(rep.order) << "\n";
    sum << "relative ||u||^2 drift = " << format_real(rep.l2_drift_rel) << "\n";
    sum << "right-boundary mass fraction (max) = " << format_real(rep.boundary_mass_max) << "\n";
    write_text(fs::path(cli.out_dir) / "summary.txt", sum.str());
    say(cli, sum.str());
    const bool pass = rep.l2_error <= 1e-3 && rep.order >= 1.8 && rep.order <= 2.2;
    return pass ? 0 : 3;
}

int run_mms(const Cli& cli, const RunConfig& cfg) {
    MmsReport rep = manufactured_solution_test(cfg.solver_params(), cfg.L, cfg.n_nodes, cfg.dt);

    std::ostringstream sum;
    sum << "manufactured solution, k = " << cfg.k << ", eps = " << format_real(cfg.eps) << "\n";
    for (const auto& lev : rep.levels)
        sum << "n = " << lev.n_nodes << ", dt = " << format_real(lev.dt)
            << ", L2 error = " << format_real(lev.l2_error) << "\n";
    sum << "minimum observed order = " << format_real(rep.min_order) << "\n";
    write_text(fs::path(cli.out_dir) / "summary.txt", sum.str());
    say(cli, sum.str());
    return rep.min_order > 1.5 ? 0 : 3;
}

int run_check_ineq(const Cli& cli, const RunConfig& cfg) {
    GridSpec grid = cfg.grid();
    InitialData data = initial_data(cfg, grid);
    InterpolationReport rep = check_interpolation_inequalities(data.u, grid);

    std::ostringstream sum;
    sum << header_lines(cfg, data);
    sum << "L4:  " << format_real(rep.l4_lhs) << " <= " << format_real(rep.l4_rhs) << "\n";
    sum << "L8:  " << format_real(rep.l8_lhs) << " <= " << format_real(rep.l8_rhs) << "\n";
    sum << "sup: " << format_real(rep.sup_lhs) << " <= " << format_real(rep.sup_rhs) << "\n";
    sum << "interpolation inequalities: " << (rep.pass ? "pass" : "FAIL") << "\n";
    write_text(fs::path(cli.out_dir) / "summary.txt", sum.str());
    say(cli, sum.str());
    return rep.pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"half-line dispersive solver and verification harness"};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "key = value run configuration file");
    app.add_option("--out", cli.out_dir, "output directory (created if absent)");
    app.add_flag("--quiet", cli.quiet, "suppress stdout summaries");

    auto* solve = app.add_subcommand("solve", "run one trajectory, emit energy and estimate CSVs");
    auto* sweep = app.add_subcommand("eps-sweep", "vanishing-regularization sweep");
    auto* gron = app.add_subcommand("gronwall", "two-trajectory uniqueness experiment (k = 2)");
    auto* bench = app.add_subcommand("soliton-bench", "traveling-wave accuracy benchmark");
    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    auto* ineq = app.add_subcommand("check-ineq", "interpolation inequalities on the initial data");
    for (auto* sub : {solve, sweep, gron, bench, mms, ineq}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg = load_config(cli);
        std::error_code ec;
        fs::create_directories(cli.out_dir, ec);
        if (ec) throw ConfigError("cannot create output directory '" + cli.out_dir + "'");

        if (solve->parsed()) return run_solve(cli, cfg);
        if (sweep->parsed()) return run_eps_sweep(cli, cfg);
        if (gron->parsed()) return run_gronwall(cli, cfg);
        if (bench->parsed()) return run_soliton_bench(cli, cfg);
        if (mms->parsed()) return run_mms(cli, cfg);
        if (ineq->parsed()) return run_check_ineq(cli, cfg);
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    }
}
