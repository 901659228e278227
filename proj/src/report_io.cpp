#include "strsim/report_io.hpp"

#include <fstream>
#include <sstream>

namespace strsim {

void write_snapshots(const SolveResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("report: cannot write " + path);
    out.precision(17);
    out << "# chart: " << result.chart << "\n";
    out << "# mass: " << result.mass << "\n";
    out << "# termination: " << to_string(result.termination) << "\n";
    out << "# t_end: " << result.t_end << "\n";
    out << "t theta x0 x1 x2 x3 v0 v1 v2 v3 w0 w1 w2 w3 lambda_minus lambda_plus delta "
           "horizon_gap\n";
    for (const auto& snap : result.snapshots) {
        for (std::size_t i = 0; i < snap.theta.size(); ++i) {
            out << snap.t << ' ' << snap.theta[i];
            for (int c = 0; c < 4; ++c) out << ' ' << snap.jets[i].u(c);
            for (int c = 0; c < 4; ++c) out << ' ' << snap.jets[i].v(c);
            for (int c = 0; c < 4; ++c) out << ' ' << snap.jets[i].w(c);
            out << ' ' << snap.lambda_minus[i] << ' ' << snap.lambda_plus[i] << ' '
                << snap.delta[i] << ' ' << snap.horizon_gap[i] << '\n';
        }
        out << '\n';
    }
}

void write_diagnostics(const DiagnosticsReport& report, const SolveResult& result,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("report: cannot write " + path);
    out.precision(17);
    out << "chart = " << result.chart << "\n";
    out << "termination = " << to_string(result.termination) << "\n";
    out << "t_end = " << result.t_end << "\n";
    out << "mass = " << result.mass << "\n";
    out << "kappa = " << result.kappa << "\n";
    out << "grid_h = " << result.grid_h << "\n";
    out << "dt = " << result.dt << "\n";
    out << "steps = " << result.steps << "\n";
    const RunningMonitors& m = report.monitors;
    out << "vinf_0 = " << m.vinf_0 << "\n";
    out << "vinf_max = " << m.vinf_max << "\n";
    out << "v1_0 = " << m.v1_0 << "\n";
    out << "v1_max = " << m.v1_max << "\n";
    out << "qv = " << m.qv << "\n";
    out << "vtilde1_max = " << m.vtilde1_max << "\n";
    out << "v1bar_max = " << m.v1bar_max << "\n";
    out << "min_s_minus_2m = " << m.min_s_minus_2m << "\n";
    out << "max_delta = " << m.max_delta << "\n";
    out << "min_gap = " << m.min_gap << "\n";
    out << "s_drift_sup = " << m.s_drift_sup << "\n";
    out << "s_drift_spatial = " << m.s_drift_spatial << "\n";
    out << "lambda_consistency = " << m.lambda_consistency << "\n";
    out << "k0 = " << report.k0 << "\n";
    out << "ks = " << report.ks << "\n";
    for (const auto& v : report.verdicts) {
        out << "verdict." << v.name << " = " << (v.pass ? "pass" : "fail")
            << (v.applicable ? "" : " (not applicable)") << "\n";
        out << "verdict." << v.name << ".measured = " << v.measured << "\n";
        out << "verdict." << v.name << ".bound = " << v.bound << "\n";
    }
}

std::string format_verdicts(const DiagnosticsReport& report) {
    std::ostringstream out;
    out.precision(6);
    for (const auto& v : report.verdicts) {
        if (!v.applicable) {
            out << "  [ -- ] " << v.name << " (not applicable)\n";
            continue;
        }
        out << (v.pass ? "  [PASS] " : "  [FAIL] ") << v.name << " measured " << v.measured
            << " bound " << v.bound << "\n";
    }
    return out.str();
}

} // namespace strsim
