#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "driver/config.hpp"

namespace fiberloc::driver {

// exit codes shared with the CLI and the C API
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitUnreliableGap = 4;

struct RunResult {
    std::vector<nlohmann::ordered_json> records;
    int exit_code = kExitOk;
};

/// Dispatches one CLI command; every record carries the config digest and the
/// library version. Throws ConfigError / NumericalNonConvergence for the
/// corresponding exit codes; an unreliable index sets exit code 4 and still
/// returns the records.
RunResult run(const std::string& command, const Config& cfg);

const std::vector<std::string>& command_names();

std::string to_json_lines(const RunResult& result);
std::string to_csv(const RunResult& result);
/// Two-column (index, lambda) dump of any spectrum payloads in the records.
std::string to_plot_data(const RunResult& result);

/// One-sided cutoff profile sampled on a uniform grid.
ScalarField emit_profile(double a, double eps, double grid_min, double grid_max, int samples);

}  // namespace fiberloc::driver
