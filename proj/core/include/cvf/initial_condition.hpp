/// @file initial_condition.hpp
/// @brief Compatible initial data from an explicit periodic deformation map.
///
/// The Lagrangian map X -> X + phi(X) has gradient F = I + grad phi. The
/// Eulerian fields are E(x) = grad phi(X(x)) and rho = 1 / det F, so the curl
/// identity and div(rho F^T) = 0 hold up to interpolation error. rho and E are
/// then restricted to the dealiased band.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cvf/spectral.hpp"
#include "cvf/state.hpp"

namespace cvf {

struct ICSpec {
  double amplitude = 0.0;                 ///< displacement magnitude, >= 0
  std::vector<std::array<int, 3>> modes;  ///< integer wavevectors of phi
  std::uint64_t seed = 0;
  double velocity_amplitude = 0.0;  ///< bound on max |u0|

  /// Throws InvalidParams on a negative or non-finite amplitude, an empty
  /// mode list with amplitude > 0, or a zero wavevector.
  void validate() const;
};

struct IcReport {
  double det_min = 1.0;          ///< min det(I + grad phi) on the refined Lagrangian grid
  int inversion_iterations = 0;  ///< fixed-point sweeps used to invert the map
  double rho_det_error = 0.0;    ///< max |rho det(I + E) - 1|
  double curl_linf = 0.0;
  double curl_l2 = 0.0;
  double piola_l2 = 0.0;
};

struct IcResult {
  FlowState state;
  IcReport report;
};

/// Throws MapNotInvertible when det(I + grad phi) <= 0 somewhere or the
/// inversion fails to converge in 100 sweeps.
IcResult generate_ic(const ICSpec& spec, const Grid& grid, const PhysParams& params,
                     SpectralWorkspace& ws);

}  // namespace cvf
