#pragma once

#include <array>
#include <string>
#include <vector>

#include "strsim/initial_data.hpp"
#include "strsim/solver.hpp"

namespace strsim {

/// Full run configuration, parsed from a sectioned key = value file.
/// Unknown sections or keys are errors; every default is documented in the
/// README schema table.
struct RunConfig {
    // [metric]
    std::string metric_kind = "schwarzschild-cartesian"; // or "minkowski"
    double mass = 1.0;
    double delta_hat = 0.1;

    // [data]
    std::string data_source = "family"; // family | file
    std::string data_file;
    EpsilonFamilySpec family;

    // [grid]
    GridParams grid;

    // [solver]
    std::string scheme = "characteristic"; // characteristic | upwind | both
    SolverParams solver;

    // [output]
    std::string output_dir = "out";
    std::string tag = "run";

    // [suites]
    unsigned long long seed = 20240817ull;
    int count = 10000;
    std::vector<std::string> suites; // empty = all
    std::string mutation = "none";

    // [sweep]
    std::string sweep_axis = "epsilon"; // epsilon | nodes | T
    std::vector<double> sweep_values;

    InitialData make_data() const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Apply one "section.key=value" override.
void apply_override(RunConfig& cfg, const std::string& spec);

} // namespace strsim
