#include "strsim/extremal.hpp"

#include <cmath>

namespace strsim {

AmbientMetric minkowski_ambient(int n) {
    AmbientMetric out;
    out.n = n;
    out.eval = [n](const VectorXd&) {
        MetricValueN mv;
        VectorXd diag = VectorXd::Ones(n + 1);
        diag(0) = -1.0;
        mv.g = diag.asDiagonal();
        mv.ginv = mv.g;
        mv.christoffel.assign(n + 1, MatrixXd::Zero(n + 1, n + 1));
        return mv;
    };
    return out;
}

AmbientMetric ambient_from_field(const MetricField& field) {
    AmbientMetric out;
    out.n = 3;
    out.eval = [field](const VectorXd& x) {
        SpacetimePoint pt;
        pt.coords = x.head<4>();
        const MetricValue v = evaluate_metric(field, pt);
        MetricValueN mv;
        mv.g = v.g;
        mv.ginv = v.ginv;
        mv.christoffel.assign(4, MatrixXd::Zero(4, 4));
        for (int c = 0; c < 4; ++c) mv.christoffel[c] = v.christoffel[c];
        return mv;
    };
    return out;
}

InducedMetricN induced_metric(const ImmersionJet& jet, const MetricValueN& ambient,
                              double degenerate_floor) {
    InducedMetricN out;
    out.g = jet.first.transpose() * ambient.g * jet.first;
    out.det = out.g.determinant();
    if (std::abs(out.det) < degenerate_floor)
        throw DegenerateMetric("induced_metric: determinant below floor");
    out.ginv = out.g.inverse();
    out.timelike = out.det < 0.0;
    return out;
}

VectorXd tension_vector(const ImmersionJet& jet, const MetricValueN& ambient,
                        const InducedMetricN& induced) {
    const int n = jet.n, p = jet.p;
    VectorXd E = VectorXd::Zero(n + 1);
    for (int c = 0; c <= n; ++c) {
        double acc = 0.0;
        for (int mu = 0; mu <= p; ++mu)
            for (int nu = 0; nu <= p; ++nu) {
                double term = jet.has_second() ? jet.second_deriv(mu, nu)(c) : 0.0;
                term += jet.first.col(mu).dot(ambient.christoffel[c] * jet.first.col(nu));
                acc += induced.ginv(mu, nu) * term;
            }
        E(c) = acc;
    }
    return E;
}

ExtremalOperators extremal_operators(const ImmersionJet& jet, const MetricValueN& ambient,
                                     const InducedMetricN& induced) {
    ExtremalOperators out;
    out.G = jet.first * induced.ginv * jet.first.transpose();
    out.M = MatrixXd::Identity(jet.n + 1, jet.n + 1) - out.G * ambient.g;
    out.E = tension_vector(jet, ambient, induced);
    return out;
}

ProjectorSpectrum normal_projector_spectrum(const ImmersionJet& jet, const MetricValueN& ambient,
                                            const InducedMetricN& induced) {
    if (!induced.timelike) throw NotTimelike("normal_projector_spectrum: det g >= 0");
    const ExtremalOperators ops = extremal_operators(jet, ambient, induced);

    Eigen::EigenSolver<MatrixXd> es(ops.M);
    ProjectorSpectrum out;
    out.eigenvalues.resize(static_cast<std::size_t>(ops.M.rows()));
    for (Eigen::Index i = 0; i < ops.M.rows(); ++i) {
        out.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()(i).real();
        out.max_imag = std::max(out.max_imag, std::abs(es.eigenvalues()(i).imag()));
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    for (double ev : out.eigenvalues)
        if (ev > 0.5) ++out.rank;
    out.idempotency_gap = (ops.M * ops.M - ops.M).cwiseAbs().maxCoeff();
    return out;
}

std::pair<double, double> annihilation_residuals(const ImmersionJet& jet,
                                                 const MetricValueN& ambient,
                                                 const InducedMetricN& induced) {
    const ExtremalOperators ops = extremal_operators(jet, ambient, induced);
    const MatrixXd& Q = jet.first;
    const double a = (ops.M * Q * Q.transpose()).cwiseAbs().maxCoeff();
    const double b = (Q.transpose() * ops.M * Q).cwiseAbs().maxCoeff();
    return {a, b};
}

double euler_lagrange_residual(const ImmersionFn& immersion, const AmbientMetric& ambient,
                               const VectorXd& u, double h) {
    const ImmersionJet jet = immersion.jet_at(u);
    const int n = jet.n, p = jet.p;
    const MetricValueN mv = ambient.eval(jet.position);
    const InducedMetricN induced = induced_metric(jet, mv);
    const ExtremalOperators ops = extremal_operators(jet, mv, induced);

    auto pullback = [&](const VectorXd& uu) {
        const ImmersionJet j = immersion.jet_at(uu);
        const MetricValueN a = ambient.eval(j.position);
        return MatrixXd(j.first.transpose() * a.g * j.first);
    };

    // dg[sigma](mu, nu) by central differences along the parameters
    std::vector<MatrixXd> dg(p + 1);
    for (int s = 0; s <= p; ++s) {
        VectorXd up = u, um = u;
        up(s) += h;
        um(s) -= h;
        dg[s] = (pullback(up) - pullback(um)) / (2.0 * h);
    }

    // induced-metric connection from the differenced metric
    std::vector<MatrixXd> gamma(p + 1, MatrixXd::Zero(p + 1, p + 1));
    for (int r = 0; r <= p; ++r)
        for (int mu = 0; mu <= p; ++mu)
            for (int nu = 0; nu <= p; ++nu) {
                double acc = 0.0;
                for (int s = 0; s <= p; ++s)
                    acc += 0.5 * induced.ginv(r, s) *
                           (dg[mu](s, nu) + dg[nu](s, mu) - dg[s](mu, nu));
                gamma[r](mu, nu) = acc;
            }

    // full Euler-Lagrange operator, connection term included
    VectorXd lhs = ops.E;
    for (int c = 0; c <= n; ++c) {
        double corr = 0.0;
        for (int mu = 0; mu <= p; ++mu)
            for (int nu = 0; nu <= p; ++nu)
                for (int r = 0; r <= p; ++r)
                    corr += induced.ginv(mu, nu) * gamma[r](mu, nu) * jet.first(c, r);
        lhs(c) -= corr;
    }

    const VectorXd me = ops.M * ops.E;
    return (lhs - me).cwiseAbs().maxCoeff();
}

ImmersionJet random_timelike_jet(const AmbientMetric& ambient, int p, std::mt19937_64& rng,
                                 const JetSampleOptions& opts) {
    const int n = ambient.n;
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
        ImmersionJet jet;
        jet.n = n;
        jet.p = p;
        jet.position = VectorXd::Zero(n + 1);
        // position at a safe radius; harmless for flat ambients
        VectorXd dir = VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) dir(i) = uni(rng);
        if (dir.norm() < 1e-3) continue;
        dir.normalize();
        const double radius = 4.0 + 4.0 * std::abs(uni(rng));
        jet.position(0) = uni(rng);
        jet.position.tail(n) = radius * dir;

        jet.first = MatrixXd::Zero(n + 1, p + 1);
        for (int c = 0; c <= n; ++c)
            for (int mu = 0; mu <= p; ++mu) jet.first(c, mu) = uni(rng);
        jet.first(0, 0) += opts.time_bias;

        if (jet.first.colPivHouseholderQr().rank() < p + 1) continue;

        const MetricValueN mv = ambient.eval(jet.position);
        InducedMetricN ind;
        try {
            ind = induced_metric(jet, mv);
        } catch (const DegenerateMetric&) {
            continue;
        }
        if (ind.det < -opts.det_margin) return jet;
    }
    throw SimError("random_timelike_jet: rejection sampling failed");
}

} // namespace strsim
