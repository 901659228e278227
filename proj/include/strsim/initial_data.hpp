#pragma once

#include <array>
#include <string>
#include <vector>

#include "strsim/characteristic_map.hpp"
#include "strsim/numerics.hpp"
#include "strsim/string_dynamics.hpp"

namespace strsim {

/// Initial position p^C(theta) and velocity q^C(theta) of the string, sampled
/// on a uniform grid over [-L, L] and constant outside. p_theta carries the
/// profile derivative: exact for generated families, spline-differenced for
/// file data.
struct InitialData {
    std::array<UniformSpline, 4> p;
    std::array<UniformSpline, 4> q;
    std::array<UniformSpline, 4> p_theta;
    double window = 0.0; // L

    WorldSheetJet jet_at(double theta) const;
};

/// Small-amplitude family: p = pbar + eps*(0, phat), q = (q0, eps*qhat) with
/// phat a unit-speed circle profile in the x1-x2 plane and qhat a Gaussian
/// bump per spatial component. q0 is 1 ("unit") or eps*q0_hat ("scaled").
struct EpsilonFamilySpec {
    double epsilon = 1e-3;
    Vec4 pbar = Vec4(0.0, 10.0, 0.0, 0.0);
    double phase = 0.0;
    std::array<double, 3> qhat_amp{0.0, 0.0, 0.0};
    double qhat_width = 1.0;
    enum class Q0Mode { Unit, Scaled } q0_mode = Q0Mode::Scaled;
    double q0_hat = 1.0;
    double window = 8.0 * 3.14159265358979323846;
    int samples = 4097;
};

InitialData make_epsilon_family(const EpsilonFamilySpec& spec);

InitialData load_initial_data(const std::string& path);
void save_initial_data(const InitialData& data, const std::string& path);

/// Enforce the exterior-region margin: min over samples of |p_spatial| must be
/// at least 2m + delta_hat. Throws HorizonViolation with the measured minimum.
void require_exterior_margin(const InitialData& data, double m, double delta_hat);

/// Initial characteristic speeds from the data. Throws NotTimelike (with the
/// offending theta in the message) when the induced metric is not time-like at
/// a sample, HorizonViolation inside the guard radius.
LambdaInitial lambda0_from_data(const InitialData& data, double m);

/// Arc-length and velocity smallness measures over the window. The "dev"
/// variants subtract the window-edge background before integrating, which is
/// the reading under which a family with a unit q0 has small data.
struct SmallnessNorms {
    std::array<double, 4> arc_bv{};
    std::array<double, 4> vel_l1_raw{};
    std::array<double, 4> vel_l1_dev{};
    double arc_bv_max = 0.0;
    double vel_l1_raw_max = 0.0;
    double vel_l1_dev_max = 0.0;
    bool q0_background_flagged = false; // raw and dev disagree materially on q^0
};
SmallnessNorms smallness_norms(const InitialData& data);

/// Initial characteristic-variable profiles P0, Q0 on the sample grid, with
/// their window L1 norms (raw and background-subtracted).
struct InitialCharProfiles {
    std::vector<double> theta;
    std::array<std::vector<double>, 4> P0;
    std::array<std::vector<double>, 4> Q0;
    std::array<double, 4> p_l1_raw{}, q_l1_raw{};
    std::array<double, 4> p_l1_dev{}, q_l1_dev{};
    double l1_raw_max = 0.0;
    double l1_dev_max = 0.0;
};
InitialCharProfiles pq0_from_data(const InitialData& data, const LambdaInitial& init);

} // namespace strsim
