#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contractlab/model.hpp"

namespace contractlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed run configuration: sectioned key=value text. Unknown sections or
/// keys are errors.
struct RunConfig {
    // [model]
    double gamma = 3.0;
    double rho = 0.25;
    double sigma = 0.9;
    double k = 0.1;
    double a_bar = 4.0;
    double T = 2.0;
    double cost_c2 = 0.5;
    double cost_c1 = 1.0;
    std::optional<double> delta;  // exactly one of delta / r
    std::optional<double> r;

    // [grid]
    double y_max = 2.0;
    int I = 40;
    int M = 100;

    // [solver]
    double eps = 1e-3;
    int max_policy_iters = 50;
    double policy_tol = 1e-10;

    // [experiment]
    std::string mode;
    int N = 1;
    std::vector<double> schedule_times;
    std::vector<double> delta_sweep;
    std::vector<double> R_sweep;
    std::optional<double> zeta;
    std::uint64_t seed = 0;
    std::int64_t n_paths = 10000;
    double y0 = 1.0;
    double dt_sim = 0.0;

    // [output]
    std::string out_dir = "out";
};

RunConfig parse_config(const std::string& path);

/// Mode-specific validation; throws ConfigError before any solver work.
void validate_config(const RunConfig& cfg, const std::string& mode);

/// Model parameters resolved from the config (delta or r).
ModelParams resolve_model(const RunConfig& cfg);

/// Same, with the delta ratio overridden (sweep entries).
ModelParams resolve_model_with_delta(const RunConfig& cfg, double delta_ratio);

/// Resolved config echo used by the run manifest.
std::string config_to_text(const RunConfig& cfg, const std::string& mode);

}  // namespace contractlab
