/// @file state.hpp
/// @brief Physical parameters, the flow state (rho, u, E) and the pressure law.
#pragma once

#include <string>
#include <vector>

#include "cvf/field.hpp"

namespace cvf {

struct PhysParams {
  double mu = 1.0;      ///< shear viscosity, > 0
  double lambda = 0.0;  ///< second viscosity, 2 mu + 3 lambda > 0
  double gamma = 2.0;   ///< pressure exponent, P = rho^gamma, gamma > 1
  double nu = 1.0;      ///< scaling parameter; pressure and elastic terms carry nu^-2

  /// Throws InvalidParams naming the first violated constraint.
  void validate() const;
  double inv_nu2() const noexcept { return 1.0 / (nu * nu); }
};

/// Density, velocity and E = F - I on one grid.
struct FlowState {
  ScalarField rho;
  VectorField u;
  TensorField E;
  double t = 0.0;

  explicit FlowState(const Grid& grid) : rho(grid, 1.0), u(grid), E(grid) {}

  /// rho = 1, u = 0, F = I.
  static FlowState equilibrium(const Grid& grid) { return FlowState(grid); }

  const Grid& grid() const noexcept { return rho.grid(); }

  friend bool operator==(const FlowState&, const FlowState&) = default;
};

/// P(rho) = rho^gamma pointwise. Throws NonPositiveDensity if any rho <= 0.
ScalarField pressure(const ScalarField& rho, double gamma);

/// (rho^gamma - gamma rho + gamma - 1) / (gamma - 1), evaluated without
/// cancellation near rho = 1; nonnegative and zero exactly at rho = 1.
double pressure_potential(double rho, double gamma);
ScalarField pressure_potential(const ScalarField& rho, double gamma);

/// Largest eta with x^gamma - 1 - gamma (x - 1) >= eta (x - 1)^2 on the
/// admissible range: all x > 0 when gamma >= 2, 0 < x < 2 when 1 < gamma < 2.
double convexity_eta(double gamma);

struct ValidationReport {
  double rho_min = 0.0;
  double rho_max = 0.0;
  std::size_t nonfinite = 0;
  bool grid_consistent = true;
  bool positive_density = true;
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
};

ValidationReport validate(const FlowState& state);

void require_positive_density(const ScalarField& rho, const char* where);

}  // namespace cvf
