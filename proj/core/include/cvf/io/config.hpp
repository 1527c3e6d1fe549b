/// @file config.hpp
/// @brief Flat `key = value` run configuration.
///
/// Lines are `key = value`; `#` starts a comment. Every key is optional and
/// defaults to the value below; unknown or repeated keys are rejected. All
/// errors are ConfigError with a message naming the offending key.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cvf/grid.hpp"
#include "cvf/initial_condition.hpp"
#include "cvf/picard.hpp"
#include "cvf/state.hpp"

namespace cvf {

struct Config {
  std::array<int, 3> grid_n = {32, 32, 32};
  std::array<double, 3> grid_length = {2.0 * std::numbers::pi, 2.0 * std::numbers::pi,
                                       2.0 * std::numbers::pi};
  PhysParams params;
  ICSpec ic;
  double dt = 1e-3;
  double t_end = 0.1;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  long output_stride = 10;
  std::string output_dir = "out";
  double norms_q = 4.0;

  Grid grid() const { return Grid(grid_n, grid_length); }
  RunConfig run_config() const;
};

/// Throws ConfigError.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Text that parse_config maps back to the same Config.
std::string format_config(const Config& cfg);

/// Re-checks every invariant of a Config; throws ConfigError naming the key.
void validate_config(const Config& cfg);

}  // namespace cvf
