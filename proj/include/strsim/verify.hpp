#pragma once

#include <random>
#include <string>
#include <vector>

#include "strsim/spherical.hpp"
#include "strsim/string_dynamics.hpp"

namespace strsim {

/// Random admissible string state: exterior position, time-like, bounded
/// speeds, |g11| away from zero.
WorldSheetJet random_string_state(std::mt19937_64& rng, double m);

/// Random admissible spherical-chart state away from the polar axis.
SphericalJet random_spherical_state(std::mt19937_64& rng, double m);

struct SuiteOptions {
    unsigned long long seed = 20240817ull;
    int count = 10000;
    std::string mutation = "none"; // none | pq-source-sign
};

struct SuiteResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double limit = 0.0;
    std::string note;
};

const std::vector<std::string>& all_suite_names();

/// Run the named identity suites (all of them when `names` is empty).
std::vector<SuiteResult> run_verification(const std::vector<std::string>& names,
                                          const SuiteOptions& opt);

} // namespace strsim
