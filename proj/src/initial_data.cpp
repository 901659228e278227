#include "strsim/initial_data.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace strsim {

WorldSheetJet InitialData::jet_at(double theta) const {
    WorldSheetJet jet;
    for (int c = 0; c < 4; ++c) {
        jet.u(c) = p[c].value(theta);
        jet.v(c) = q[c].value(theta);
        jet.w(c) = p_theta[c].value(theta);
    }
    return jet;
}

InitialData make_epsilon_family(const EpsilonFamilySpec& spec) {
    if (spec.samples < 4) throw SimError("epsilon family: need at least 4 samples");
    if (!(spec.epsilon > 0.0)) throw SimError("epsilon family: epsilon must be positive");
    if (!(spec.window > 0.0)) throw SimError("epsilon family: window must be positive");

    const int n = spec.samples;
    const double L = spec.window;
    const double h = 2.0 * L / static_cast<double>(n - 1);
    const double eps = spec.epsilon;
    const double q0 =
        spec.q0_mode == EpsilonFamilySpec::Q0Mode::Unit ? 1.0 : eps * spec.q0_hat;

    std::array<std::vector<double>, 4> pv, qv, pd;
    for (auto& v : pv) v.resize(n);
    for (auto& v : qv) v.resize(n);
    for (auto& v : pd) v.resize(n);

    for (int j = 0; j < n; ++j) {
        const double th = -L + h * j;
        const double s = th + spec.phase;
        const double bump = std::exp(-(th / spec.qhat_width) * (th / spec.qhat_width));
        pv[0][j] = spec.pbar(0);
        pv[1][j] = spec.pbar(1) + eps * std::sin(s);
        pv[2][j] = spec.pbar(2) + eps * std::cos(s);
        pv[3][j] = spec.pbar(3);
        pd[0][j] = 0.0;
        pd[1][j] = eps * std::cos(s);
        pd[2][j] = -eps * std::sin(s);
        pd[3][j] = 0.0;
        qv[0][j] = q0;
        for (int i = 0; i < 3; ++i) qv[1 + i][j] = eps * spec.qhat_amp[i] * bump;
    }

    InitialData data;
    data.window = L;
    for (int c = 0; c < 4; ++c) {
        data.p[c] = UniformSpline(-L, h, std::move(pv[c]));
        data.q[c] = UniformSpline(-L, h, std::move(qv[c]));
        data.p_theta[c] = UniformSpline(-L, h, std::move(pd[c]));
    }
    return data;
}

InitialData load_initial_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError("initial data: cannot open " + path);

    std::vector<std::array<double, 9>> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            // first non-comment line is the column header
            header_seen = true;
            if (line.find("theta") != std::string::npos) continue;
            // fall through: headerless files start with numbers
        }
        std::istringstream ss(line);
        std::array<double, 9> row{};
        for (double& val : row)
            if (!(ss >> val)) throw SimError("initial data: malformed row in " + path);
        rows.push_back(row);
    }
    if (rows.size() < 4) throw SimError("initial data: need at least 4 rows");

    const double h = rows[1][0] - rows[0][0];
    if (!(h > 0)) throw SimError("initial data: theta must be increasing");
    for (std::size_t j = 1; j < rows.size(); ++j) {
        const double step = rows[j][0] - rows[j - 1][0];
        if (std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw SimError("initial data: theta grid must be uniform");
    }
    const double lo = rows.front()[0], hi = rows.back()[0];
    if (std::abs(lo + hi) > 1e-9 * (std::abs(lo) + std::abs(hi)))
        throw SimError("initial data: window must be symmetric about 0");

    InitialData data;
    data.window = hi;
    for (int c = 0; c < 4; ++c) {
        std::vector<double> pc(rows.size()), qc(rows.size());
        for (std::size_t j = 0; j < rows.size(); ++j) {
            pc[j] = rows[j][1 + c];
            qc[j] = rows[j][5 + c];
        }
        data.p[c] = UniformSpline(lo, h, std::move(pc));
        data.q[c] = UniformSpline(lo, h, std::move(qc));
    }
    // derivative profiles from the position splines
    for (int c = 0; c < 4; ++c) {
        std::vector<double> d(rows.size());
        for (std::size_t j = 0; j < rows.size(); ++j) d[j] = data.p[c].derivative(rows[j][0]);
        data.p_theta[c] = UniformSpline(lo, h, std::move(d));
    }
    return data;
}

void save_initial_data(const InitialData& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("initial data: cannot write " + path);
    out.precision(17);
    out << "theta p0 p1 p2 p3 q0 q1 q2 q3\n";
    const auto& ref = data.p[0];
    for (std::size_t j = 0; j < ref.size(); ++j) {
        const double th = ref.x_min() + ref.spacing() * static_cast<double>(j);
        out << th;
        for (int c = 0; c < 4; ++c) out << ' ' << data.p[c].value(th);
        for (int c = 0; c < 4; ++c) out << ' ' << data.q[c].value(th);
        out << '\n';
    }
}

void require_exterior_margin(const InitialData& data, double m, double delta_hat) {
    if (m == 0.0) return;
    const auto& ref = data.p[0];
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ref.size(); ++j) {
        const double th = ref.x_min() + ref.spacing() * static_cast<double>(j);
        const Vec3 x(data.p[1].value(th), data.p[2].value(th), data.p[3].value(th));
        worst = std::min(worst, x.norm());
    }
    if (worst < 2.0 * m + delta_hat) {
        std::ostringstream msg;
        msg << "initial data: min |p_spatial| = " << worst << " violates 2m + margin = "
            << 2.0 * m + delta_hat;
        throw HorizonViolation(msg.str());
    }
}

LambdaInitial lambda0_from_data(const InitialData& data, double m) {
    const auto& ref = data.p[0];
    const std::size_t n = ref.size();
    std::vector<double> lm(n), lp(n);
    double kappa = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double th = ref.x_min() + ref.spacing() * static_cast<double>(j);
        const WorldSheetJet jet = data.jet_at(th);
        const InducedMetric2 g = induced_metric_cartesian(jet, m);
        if (!(g.delta < 0.0)) {
            std::ostringstream msg;
            msg << "initial data not time-like at theta = " << th << " (det = " << g.delta << ")";
            throw NotTimelike(msg.str());
        }
        const auto [a, b] = characteristic_speeds(g);
        lm[j] = a;
        lp[j] = b;
        kappa = std::min(kappa, b - a);
    }
    LambdaInitial init;
    init.window = data.window;
    init.kappa = kappa;
    init.lambda_minus0 = UniformSpline(ref.x_min(), ref.spacing(), std::move(lm));
    init.lambda_plus0 = UniformSpline(ref.x_min(), ref.spacing(), std::move(lp));
    return init;
}

SmallnessNorms smallness_norms(const InitialData& data) {
    SmallnessNorms out;
    const double L = data.window;
    for (int c = 0; c < 4; ++c) {
        out.arc_bv[c] = adaptive_simpson(
            [&](double th) { return std::abs(data.p_theta[c].value(th)); }, -L, L, 1e-12, 48);
        out.vel_l1_raw[c] = adaptive_simpson(
            [&](double th) { return std::abs(data.q[c].value(th)); }, -L, L, 1e-12, 48);
        const double background = 0.5 * (data.q[c].value(-L) + data.q[c].value(L));
        out.vel_l1_dev[c] = adaptive_simpson(
            [&](double th) { return std::abs(data.q[c].value(th) - background); }, -L, L, 1e-12,
            48);
        out.arc_bv_max = std::max(out.arc_bv_max, out.arc_bv[c]);
        out.vel_l1_raw_max = std::max(out.vel_l1_raw_max, out.vel_l1_raw[c]);
        out.vel_l1_dev_max = std::max(out.vel_l1_dev_max, out.vel_l1_dev[c]);
    }
    out.q0_background_flagged =
        std::abs(out.vel_l1_raw[0] - out.vel_l1_dev[0]) > 1e-6 * (1.0 + out.vel_l1_raw[0]);
    return out;
}

InitialCharProfiles pq0_from_data(const InitialData& data, const LambdaInitial& init) {
    const auto& ref = data.p[0];
    const std::size_t n = ref.size();
    InitialCharProfiles out;
    out.theta.resize(n);
    for (auto& v : out.P0) v.resize(n);
    for (auto& v : out.Q0) v.resize(n);

    for (std::size_t j = 0; j < n; ++j) {
        const double th = ref.x_min() + ref.spacing() * static_cast<double>(j);
        out.theta[j] = th;
        const double lm = init.lambda_minus0.value(th);
        const double lp = init.lambda_plus0.value(th);
        for (int c = 0; c < 4; ++c) {
            const double qc = data.q[c].value(th);
            const double dc = data.p_theta[c].value(th);
            out.P0[c][j] = qc + lm * dc;
            out.Q0[c][j] = qc + lp * dc;
        }
    }

    const double h = ref.spacing();
    auto l1 = [&](const std::vector<double>& f, double background) {
        double acc = 0.0;
        for (std::size_t j = 1; j < f.size(); ++j)
            acc += 0.5 * h * (std::abs(f[j] - background) + std::abs(f[j - 1] - background));
        return acc;
    };
    for (int c = 0; c < 4; ++c) {
        out.p_l1_raw[c] = l1(out.P0[c], 0.0);
        out.q_l1_raw[c] = l1(out.Q0[c], 0.0);
        out.p_l1_dev[c] = l1(out.P0[c], 0.5 * (out.P0[c].front() + out.P0[c].back()));
        out.q_l1_dev[c] = l1(out.Q0[c], 0.5 * (out.Q0[c].front() + out.Q0[c].back()));
        out.l1_raw_max = std::max({out.l1_raw_max, out.p_l1_raw[c], out.q_l1_raw[c]});
        out.l1_dev_max = std::max({out.l1_dev_max, out.p_l1_dev[c], out.q_l1_dev[c]});
    }
    return out;
}

} // namespace strsim
