// Command-line front end: run a simulation, run the identity suites, sweep a
// parameter axis, or generate an initial-data table.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "strsim/config.hpp"
#include "strsim/report_io.hpp"
#include "strsim/spherical.hpp"
#include "strsim/verify.hpp"

namespace fs = std::filesystem;
using namespace strsim;

namespace {

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    RunConfig cfg = path.empty() ? RunConfig{} : parse_config_file(path);
    for (const auto& ov : overrides) apply_override(cfg, ov);
    const char* env_dir = std::getenv("STRSIM_OUT_DIR");
    if (env_dir && cfg.output_dir == "out") cfg.output_dir = env_dir;
    return cfg;
}

SolverParams solver_params(const RunConfig& cfg) {
    SolverParams sp = cfg.solver;
    sp.delta_hat = cfg.delta_hat;
    return sp;
}

double config_mass(const RunConfig& cfg) {
    return cfg.metric_kind == "minkowski" ? 0.0 : cfg.mass;
}

struct RunArtifacts {
    SolveResult result;
    DiagnosticsReport report;
};

RunArtifacts execute_single(const RunConfig& cfg, const std::string& scheme) {
    const InitialData data = cfg.make_data();
    const double m = config_mass(cfg);
    const SolverParams sp = solver_params(cfg);
    RunArtifacts art;
    if (scheme == "characteristic")
        art.result = solve_characteristic(data, m, cfg.grid, sp);
    else if (scheme == "upwind")
        art.result = solve_upwind_raw(data, m, cfg.grid, sp);
    else
        throw ConfigError("run: unknown scheme " + scheme);
    const double eps = cfg.data_source == "family" ? cfg.family.epsilon : 0.0;
    art.report = estimate_monitors(art.result, eps);
    return art;
}

int cmd_run(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    std::vector<std::string> schemes;
    if (cfg.scheme == "both") {
        schemes = {"characteristic", "upwind"};
    } else {
        schemes = {cfg.scheme};
    }

    bool ok = true;
    for (const auto& scheme : schemes) {
        try {
            const RunArtifacts art = execute_single(cfg, scheme);
            const std::string base =
                (fs::path(cfg.output_dir) / (cfg.tag + "_" + scheme)).string();
            write_snapshots(art.result, base + "_snapshots.dat");
            write_diagnostics(art.report, art.result, base + "_diagnostics.dat");
            std::cout << scheme << ": " << to_string(art.result.termination) << " at t = "
                      << art.result.t_end << "\n"
                      << format_verdicts(art.report);
            if (art.result.termination != Termination::ReachedT || !art.report.all_pass())
                ok = false;
        } catch (const AssumptionViolated& e) {
            std::cerr << "rejected: " << e.what() << "\n";
            return 1;
        } catch (const HorizonViolation& e) {
            std::cerr << "rejected: " << e.what() << "\n";
            return 1;
        }
    }
    return ok ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::vector<std::string>& suites) {
    SuiteOptions opt;
    opt.seed = cfg.seed;
    opt.count = cfg.count;
    opt.mutation = cfg.mutation;
    std::vector<std::string> names = suites.empty() ? cfg.suites : suites;
    const auto results = run_verification(names, opt);
    bool ok = true;
    std::cout.precision(6);
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << " measured " << r.measured
                  << " limit " << r.limit;
        if (!r.note.empty()) std::cout << " (" << r.note << ")";
        std::cout << "\n";
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}

int cmd_sweep(const RunConfig& base) {
    if (base.sweep_values.empty()) throw ConfigError("sweep: sweep.values is empty");
    fs::create_directories(base.output_dir);

    struct Row {
        double value = 0.0;
        bool ok = false;
        std::string termination;
        double qv = 0.0, vinf_ratio = 0.0, v1_ratio = 0.0, s_drift = 0.0;
        double final_deviation = 0.0; // nodes axis: distance to the next-finer run
    };

    std::vector<std::future<SolveResult>> jobs;
    std::vector<RunConfig> cfgs;
    for (double v : base.sweep_values) {
        RunConfig cfg = base;
        if (base.sweep_axis == "epsilon")
            cfg.family.epsilon = v;
        else if (base.sweep_axis == "nodes")
            cfg.grid.nodes = static_cast<int>(v);
        else if (base.sweep_axis == "T")
            cfg.solver.T = v;
        cfgs.push_back(cfg);
        jobs.push_back(std::async(std::launch::async, [cfg] {
            return solve_characteristic(cfg.make_data(), config_mass(cfg), cfg.grid,
                                        solver_params(cfg));
        }));
    }

    std::vector<Row> rows(jobs.size());
    std::vector<SolveResult> results(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        Row& row = rows[i];
        row.value = base.sweep_values[i];
        try {
            results[i] = jobs[i].get();
            const RunningMonitors& m = results[i].monitors;
            row.ok = results[i].termination == Termination::ReachedT;
            row.termination = to_string(results[i].termination);
            row.qv = m.qv;
            row.vinf_ratio = m.vinf_0 > 0.0 ? m.vinf_max / m.vinf_0 : 0.0;
            row.v1_ratio = m.v1_0 > 0.0 ? m.v1_max / m.v1_0 : 0.0;
            row.s_drift = m.s_drift_sup;
        } catch (const SimError& e) {
            row.termination = std::string("error: ") + e.what();
        }
    }

    // self-convergence distances for the resolution axis
    if (base.sweep_axis == "nodes") {
        for (std::size_t i = 0; i + 1 < results.size(); ++i) {
            if (results[i].snapshots.empty() || results[i + 1].snapshots.empty()) continue;
            const Snapshot& a = results[i].snapshots.back();
            const Snapshot& b = results[i + 1].snapshots.back();
            const double lo = std::max(a.theta.front(), b.theta.front());
            const double hi = std::min(a.theta.back(), b.theta.back());
            rows[i].final_deviation = snapshot_deviation(a, b, lo + 0.1 * (hi - lo),
                                                         hi - 0.1 * (hi - lo), 257);
        }
    }

    const std::string path =
        (fs::path(base.output_dir) / (base.tag + "_sweep.dat")).string();
    std::ofstream out(path);
    out.precision(12);
    out << "# axis: " << base.sweep_axis << "\n";
    out << "value termination qv vinf_ratio v1_ratio s_drift final_deviation\n";
    for (const auto& row : rows)
        out << row.value << ' ' << row.termination << ' ' << row.qv << ' ' << row.vinf_ratio
            << ' ' << row.v1_ratio << ' ' << row.s_drift << ' ' << row.final_deviation << "\n";

    // fitted scaling exponents on the epsilon axis
    if (base.sweep_axis == "epsilon") {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int npts = 0;
        for (const auto& row : rows) {
            if (!row.ok || row.qv <= 0.0) continue;
            const double x = std::log(row.value), y = std::log(row.qv);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++npts;
        }
        if (npts >= 2) {
            const double slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
            out << "# qv_epsilon_exponent = " << slope << "\n";
            std::cout << "qv epsilon exponent = " << slope << "\n";
        }
    }
    std::cout << "sweep table written to " << path << "\n";
    bool ok = true;
    for (const auto& row : rows) ok = ok && row.ok;
    return ok ? 0 : 1;
}

int cmd_gen_data(const RunConfig& cfg, const std::string& out_path) {
    const InitialData data = make_epsilon_family(cfg.family);
    save_initial_data(data, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relativistic string world-sheet simulator (Schwarzschild exterior)"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "configuration file");
    app.add_option("--set", overrides, "override: section.key=value")->take_all();

    auto* run = app.add_subcommand("run", "integrate the string and emit snapshots + diagnostics");
    auto* verify = app.add_subcommand("verify", "run the identity/property suites");
    std::vector<std::string> suites;
    verify->add_option("--suite", suites, "suite name(s); default all")->take_all();
    std::string mutation_flag;
    verify->add_option("--mutate", mutation_flag, "fault injection (pq-source-sign)");
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and fit scaling exponents");
    auto* gen = app.add_subcommand("gen-data", "write an initial-data table for the family");
    std::string gen_out = "initial_data.dat";
    gen->add_option("--out", gen_out, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path, overrides);
        if (!mutation_flag.empty()) cfg.mutation = mutation_flag;
        if (run->parsed()) return cmd_run(cfg);
        if (verify->parsed()) return cmd_verify(cfg, suites);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (gen->parsed()) return cmd_gen_data(cfg, gen_out);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
