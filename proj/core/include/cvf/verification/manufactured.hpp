/// @file manufactured.hpp
/// @brief Closed-form trigonometric solutions with cubic-in-time amplitudes
/// and their exact forcing for the rho, u and E equations.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cvf/field.hpp"
#include "cvf/state.hpp"

namespace cvf {

/// c0 + c1 t + c2 t^2 + c3 t^3
struct CubicPoly {
  std::array<double, 4> c{};
  double value(double t) const noexcept { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); }
  double derivative(double t) const noexcept { return c[1] + t * (2.0 * c[2] + t * 3.0 * c[3]); }
};

/// amplitude(t) * sin(kappa . x + phase)
struct TrigTerm {
  std::array<double, 3> kappa{};
  double phase = 0.0;
  CubicPoly amplitude;
};

/// base(t) + sum of trigonometric terms.
struct ModeTable {
  CubicPoly base;
  std::vector<TrigTerm> terms;
};

struct ManufacturedSolution {
  std::array<double, 3> length{};  ///< box the wavevectors are periodic on
  ModeTable rho;
  std::array<ModeTable, 3> u;
  std::array<ModeTable, 9> E;   ///< row-major (i, j)
  double t_begin = 0.0;
  double t_end = 1.0;

  /// Throws InvalidParams unless t_begin < t_end and rho* > 0 on the window.
  void validate() const;
  /// rho*, u*, E* sampled on `grid` at time t; grid lengths must match.
  FlowState exact(const Grid& grid, double t) const;
};

struct ForcingFields {
  ScalarField g_rho;
  VectorField g_u;
  TensorField g_E;
};

/// Residuals of the three equations at the exact solution, evaluated from the
/// mode table without numerical differentiation. Throws OutOfWindow.
ForcingFields forcing_eval(const ManufacturedSolution& sol, double t, const Grid& grid,
                           const PhysParams& params);

/// rho* = 1, u* = 0, E* = 0.
ManufacturedSolution equilibrium_solution(double length, double t_end);

/// Deterministic multi-mode solution with |m_a| <= 1 wavevectors, so every
/// cubic nonlinearity stays below wavenumber 3 per axis.
ManufacturedSolution trig_solution(double length, double amplitude, double t_end,
                                   std::uint64_t seed = 1);

/// The same solution in nu-scaled variables: y = nu x, s = nu^2 t, v = u / nu.
ManufacturedSolution scaled(const ManufacturedSolution& sol, double nu);

}  // namespace cvf
