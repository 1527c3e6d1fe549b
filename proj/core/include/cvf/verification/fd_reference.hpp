/// @file fd_reference.hpp
/// @brief Brute-force reference solver: explicit Euler in time, second-order
/// central differences in space, fully coupled, no dealiasing.
///
/// Deliberately shares no derivative code with the spectral library; it
/// depends only on the field containers and the pressure law.
#pragma once

#include "cvf/field.hpp"
#include "cvf/state.hpp"

namespace cvf {

struct OracleConfig {
  int n = 8;          ///< per-axis resolution, <= 16
  double dt = 1e-4;
  int steps = 100;

  void validate() const;
};

/// Throws CflViolation when the advective or viscous explicit limit is
/// exceeded, PositivityLost when rho' <= 0.
FlowState fd_reference_step(const FlowState& state, double dt, const PhysParams& params,
                            const OracleConfig& cfg);

/// cfg.steps calls of fd_reference_step with cfg.dt.
FlowState fd_reference_run(const FlowState& initial, const PhysParams& params,
                           const OracleConfig& cfg);

}  // namespace cvf
