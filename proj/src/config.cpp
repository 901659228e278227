#include "strsim/config.hpp"

#include <fstream>
#include <sstream>

namespace strsim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean value for " + key + ": '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::string token;
    std::istringstream ss(v);
    while (ss >> token) {
        // allow comma separation as well
        if (!token.empty() && token.back() == ',') token.pop_back();
        if (token.empty()) continue;
        out.push_back(to_double(key, token));
    }
    return out;
}

void set_key(RunConfig& cfg, const std::string& section, const std::string& key,
             const std::string& value) {
    const std::string full = section + "." + key;

    if (section == "metric") {
        if (key == "kind") {
            if (value != "minkowski" && value != "schwarzschild-cartesian")
                throw ConfigError("config: metric.kind must be minkowski or "
                                  "schwarzschild-cartesian, got '" +
                                  value + "'");
            cfg.metric_kind = value;
        } else if (key == "mass") {
            cfg.mass = to_double(full, value);
        } else if (key == "delta_hat") {
            cfg.delta_hat = to_double(full, value);
        } else {
            throw ConfigError("config: unknown key " + full);
        }
        return;
    }

    if (section == "data") {
        if (key == "source") {
            if (value != "family" && value != "file")
                throw ConfigError("config: data.source must be family or file");
            cfg.data_source = value;
        } else if (key == "file") {
            cfg.data_file = value;
        } else if (key == "epsilon") {
            cfg.family.epsilon = to_double(full, value);
        } else if (key == "pbar") {
            const auto v = to_doubles(full, value);
            if (v.size() != 4) throw ConfigError("config: data.pbar needs 4 values");
            for (int i = 0; i < 4; ++i) cfg.family.pbar(i) = v[static_cast<std::size_t>(i)];
        } else if (key == "phase") {
            cfg.family.phase = to_double(full, value);
        } else if (key == "qhat_amp") {
            const auto v = to_doubles(full, value);
            if (v.size() != 3) throw ConfigError("config: data.qhat_amp needs 3 values");
            for (int i = 0; i < 3; ++i)
                cfg.family.qhat_amp[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)];
        } else if (key == "qhat_width") {
            cfg.family.qhat_width = to_double(full, value);
        } else if (key == "q0_mode") {
            if (value == "unit")
                cfg.family.q0_mode = EpsilonFamilySpec::Q0Mode::Unit;
            else if (value == "scaled")
                cfg.family.q0_mode = EpsilonFamilySpec::Q0Mode::Scaled;
            else
                throw ConfigError("config: data.q0_mode must be unit or scaled");
        } else if (key == "q0_hat") {
            cfg.family.q0_hat = to_double(full, value);
        } else if (key == "window") {
            cfg.family.window = to_double(full, value);
        } else if (key == "samples") {
            cfg.family.samples = to_int(full, value);
        } else {
            throw ConfigError("config: unknown key " + full);
        }
        return;
    }

    if (section == "grid") {
        if (key == "nodes") {
            cfg.grid.nodes = to_int(full, value);
        } else if (key == "cfl") {
            cfg.grid.cfl = to_double(full, value);
            if (!(cfg.grid.cfl > 0.0 && cfg.grid.cfl <= 1.0))
                throw ConfigError("config: grid.cfl must be in (0, 1]");
        } else if (key == "interp") {
            if (value == "linear")
                cfg.grid.interp = GridParams::FootInterp::Linear;
            else if (value == "cubic")
                cfg.grid.interp = GridParams::FootInterp::Cubic;
            else
                throw ConfigError("config: grid.interp must be linear or cubic");
        } else if (key == "pad") {
            cfg.grid.pad = to_double(full, value);
        } else {
            throw ConfigError("config: unknown key " + full);
        }
        return;
    }

    if (section == "solver") {
        if (key == "scheme") {
            if (value != "characteristic" && value != "upwind" && value != "both")
                throw ConfigError("config: solver.scheme must be characteristic, upwind or both");
            cfg.scheme = value;
        } else if (key == "T") {
            cfg.solver.T = to_double(full, value);
        } else if (key == "gap_floor_factor") {
            cfg.solver.gap_floor_factor = to_double(full, value);
        } else if (key == "snapshot_stride") {
            cfg.solver.snapshot_stride = to_int(full, value);
        } else if (key == "allow_assumption_violations") {
            cfg.solver.allow_assumption_violations = to_bool(full, value);
        } else {
            throw ConfigError("config: unknown key " + full);
        }
        return;
    }

    if (section == "output") {
        if (key == "dir")
            cfg.output_dir = value;
        else if (key == "tag")
            cfg.tag = value;
        else
            throw ConfigError("config: unknown key " + full);
        return;
    }

    if (section == "suites") {
        if (key == "seed") {
            cfg.seed = static_cast<unsigned long long>(std::stoull(value));
        } else if (key == "count") {
            cfg.count = to_int(full, value);
        } else if (key == "run") {
            cfg.suites.clear();
            std::istringstream ss(value);
            std::string token;
            while (ss >> token) cfg.suites.push_back(token);
        } else if (key == "mutation") {
            cfg.mutation = value;
        } else {
            throw ConfigError("config: unknown key " + full);
        }
        return;
    }

    if (section == "sweep") {
        if (key == "axis") {
            if (value != "epsilon" && value != "nodes" && value != "T")
                throw ConfigError("config: sweep.axis must be epsilon, nodes or T");
            cfg.sweep_axis = value;
        } else if (key == "values") {
            cfg.sweep_values = to_doubles(full, value);
        } else {
            throw ConfigError("config: unknown key " + full);
        }
        return;
    }

    throw ConfigError("config: unknown section [" + section + "]");
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config: key outside of any section at line " +
                              std::to_string(lineno));
        set_key(cfg, section, key, value);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& spec) {
    const auto eq = spec.find('=');
    const auto dot = spec.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("config: override must look like section.key=value, got '" + spec + "'");
    set_key(cfg, spec.substr(0, dot), spec.substr(dot + 1, eq - dot - 1), spec.substr(eq + 1));
}

InitialData RunConfig::make_data() const {
    if (data_source == "file") {
        if (data_file.empty()) throw ConfigError("config: data.source=file requires data.file");
        return load_initial_data(data_file);
    }
    return make_epsilon_family(family);
}

} // namespace strsim
