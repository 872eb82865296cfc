#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace contractlab {

struct CliOverrides {
    std::string mode;  ///< empty: take the mode from the config file
    std::optional<std::string> out_dir;
    std::optional<double> eps;
    std::optional<std::uint64_t> seed;
};

/// Executes the requested experiment and writes its artifact files.
/// Returns the process exit code: 0 ok, 2 validation error, 3 solver
/// nonconvergence, 4 I/O error.
int run(const std::string& config_path, const CliOverrides& overrides = {});

}  // namespace contractlab
