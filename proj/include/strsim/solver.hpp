#pragma once

#include <array>
#include <string>
#include <vector>

#include "strsim/characteristic_map.hpp"
#include "strsim/initial_data.hpp"
#include "strsim/string_dynamics.hpp"

namespace strsim {

enum class Termination { ReachedT, HorizonViolation, TimelikeLost, GapCollapse, NumericalFailure };

const char* to_string(Termination t);

struct GridParams {
    int nodes = 4096;
    double cfl = 1.0; // with cfl = 1 the characteristic feet land on grid nodes
    enum class FootInterp { Linear, Cubic } interp = FootInterp::Linear;
    double pad = 2.0; // extra coordinate width beyond the light cone of the data window
};

struct SolverParams {
    double T = 10.0;
    double delta_hat = 0.1;          // data margin; run aborts at |S| <= 2m + delta_hat/2
    double gap_floor_factor = 1e-3;  // gap floor = factor * initial kappa
    int snapshot_stride = 0;         // 0: keep only initial and final states
    bool allow_assumption_violations = false;
};

/// One stored time level. For the characteristic path `vartheta` is the native
/// grid and `theta` its image under the map; for raw-chart paths both carry
/// the same uniform theta grid.
struct Snapshot {
    double t = 0.0;
    std::vector<double> vartheta;
    std::vector<double> theta;
    std::vector<WorldSheetJet> jets;
    std::vector<double> lambda_minus, lambda_plus, delta, horizon_gap;
};

/// Monitors accumulated over a run. Integrals are over the grid window in the
/// native coordinate of the run and rectangle/trapezoid sums in time.
struct RunningMonitors {
    double vinf_0 = 0.0, vinf_max = 0.0;
    double v1_0 = 0.0, v1_max = 0.0;
    double qv = 0.0;
    double vtilde1_max = 0.0;
    double v1bar_max = 0.0;
    double min_s_minus_2m = 0.0;
    double max_delta = 0.0;
    double min_gap = 0.0;
    double s_drift_sup = 0.0;         // max_mu sup |S^mu(tau,.) - S^mu(0, center)|
    double s_drift_spatial = 0.0;     // sup |S_spatial(tau,.) - S_spatial(0, center)|
    double lambda_consistency = 0.0;  // max |speeds(reconstructed g) - transported speeds|
};

struct SolveResult {
    Termination termination = Termination::ReachedT;
    double t_end = 0.0;
    std::vector<Snapshot> snapshots;
    RunningMonitors monitors;
    std::string chart;
    double mass = 0.0;
    double kappa = 0.0;
    double delta_hat = 0.0;
    double grid_h = 0.0;
    double dt = 0.0;
    int steps = 0;
    AssumptionReport assumptions;
};

/// Production path: integrate the characteristic-variable system in the
/// straightened coordinates (speeds exactly 0, +1, -1), sources by Heun steps
/// along the exact characteristics.
SolveResult solve_characteristic(const InitialData& data, double m, const GridParams& grid,
                                 const SolverParams& params);

/// Oracle path: first-order upwind scheme for the raw 12-component quasilinear
/// system on a uniform theta grid, local characteristic decomposition with
/// frozen coefficients. Valid inside the domain of determinacy of the window.
SolveResult solve_upwind_raw(const InitialData& data, double m, const GridParams& grid,
                             const SolverParams& params);

/// Closed-form flat-space solution for orthonormal-gauge data (m = 0,
/// g01 = 0 and g00 + g11 = 0 at t = 0). Throws GaugeViolation otherwise.
class DalembertOracle {
  public:
    explicit DalembertOracle(const InitialData& data, double gauge_tol = 1e-10);
    Vec4 operator()(double t, double theta) const;

  private:
    InitialData data_;
};

/// Second-order reference integrator for the two transport equations of the
/// characteristic speeds in the raw (t, theta) chart (three-stage
/// strong-stability Runge-Kutta with central differences).
struct LambdaFieldResult {
    std::vector<double> theta;
    std::vector<double> times;
    std::vector<std::vector<double>> lambda_minus; // [time][theta]
    std::vector<std::vector<double>> lambda_plus;
};
LambdaFieldResult integrate_transport_reference(const LambdaInitial& init, double T, int nodes,
                                                int time_samples, double window, double cfl = 0.4);

/// Cubic (4-point Lagrange) sample of the stored snapshot position field at a
/// physical theta.
Vec4 sample_position(const Snapshot& snap, double theta);

struct Verdict {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
    bool applicable = true;
};

struct DiagnosticsReport {
    std::vector<Verdict> verdicts;
    RunningMonitors monitors;
    Termination termination = Termination::ReachedT;
    double k0 = 0.0; // v1_0 / epsilon, when epsilon declared
    double ks = 0.0; // s_drift / epsilon
    bool all_pass() const;
};

/// Assemble the verdict suite from accumulated monitors. `epsilon` is the
/// declared data amplitude (0 when not applicable).
DiagnosticsReport estimate_monitors(const SolveResult& result, double epsilon);

} // namespace strsim
