/// @file oracle_compare.hpp
/// @brief Main solver against the finite-difference reference on one seed.
#pragma once

#include <cstdint>

#include "cvf/picard.hpp"
#include "cvf/verification/fd_reference.hpp"

namespace cvf {

struct OracleComparison {
  /// max |main - fd_N| per field
  double diff_rho = 0.0, diff_u = 0.0, diff_E = 0.0;
  /// Richardson estimate 4/3 max |fd_N - fd_2N restricted| per field
  double est_rho = 0.0, est_u = 0.0, est_E = 0.0;

  /// Largest diff / est over the three fields.
  double ratio() const noexcept;
};

struct OracleCompareSpec {
  OracleConfig oracle;         ///< N, dt and step count of the comparison
  double amplitude = 1e-3;    ///< displacement and velocity amplitude of the data
  std::uint64_t seed = 0;
  PhysParams params;
  StepOptions step;
};

/// The fine reference runs at 2N, so cfg.oracle.n must be <= 8.
OracleComparison oracle_compare(const OracleCompareSpec& spec);

}  // namespace cvf
