/// @file transport.hpp
/// @brief One-step solvers for density and deformation transport against a
/// velocity held fixed over the step, and the sigma = grad ln rho auxiliaries.
#pragma once

#include <functional>
#include <span>

#include "cvf/field.hpp"
#include "cvf/spectral.hpp"

namespace cvf {

enum class TransportScheme { SpectralRk4, SemiLagrangianRk2 };

struct TransportOptions {
  TransportScheme scheme = TransportScheme::SpectralRk4;
  bool dealias = true;
  int substeps = 1;         ///< sub-steps per call
  double cfl_limit = 0.5;   ///< bound on max|w| dt_sub / h_min

  void validate() const;
};

/// Additive source terms evaluated at time t; implementations fill `out`.
using ScalarSource = std::function<void(double t, ScalarField& out)>;
using TensorSource = std::function<void(double t, TensorField& out)>;

/// max_x |w(x)| * dt / h_min
double cfl_number(const VectorField& w, double dt);

/// One step of rho_t + div(rho w) = g on [t0, t0 + dt].
/// Throws CflViolation, NonPositiveDensity on input, PositivityLost on output.
ScalarField advance_density(SpectralWorkspace& ws, const ScalarField& rho, const VectorField& w,
                            double dt, const TransportOptions& opts,
                            const ScalarSource& source = {}, double t0 = 0.0);

/// One step of E_t + w.grad E = grad w E + grad w + g on [t0, t0 + dt].
TensorField advance_deformation(SpectralWorkspace& ws, const TensorField& E, const VectorField& w,
                                double dt, const TransportOptions& opts,
                                const TensorSource& source = {}, double t0 = 0.0);

/// As above with the velocity gradient supplied directly instead of being
/// derived from w.
TensorField advance_deformation(SpectralWorkspace& ws, const TensorField& E, const VectorField& w,
                                const TensorField& grad_w, double dt, const TransportOptions& opts,
                                const TensorSource& source = {}, double t0 = 0.0);

struct SigmaField {
  VectorField sigma;  ///< grad ln rho
};

/// Throws NonPositiveDensity.
SigmaField sigma_from_density(SpectralWorkspace& ws, const ScalarField& rho);

struct SigmaResidual {
  double l2 = 0.0;
  double linf = 0.0;
};

/// (sigma^{n+1} - sigma^{n-1}) / (2 dt) + grad(u^n . sigma^n), maximised over
/// every interior sample of equally spaced series. Throws InsufficientHistory
/// with fewer than 3 states or series of unequal length.
SigmaResidual sigma_evolution_residual(SpectralWorkspace& ws,
                                       std::span<const ScalarField> rho_series,
                                       std::span<const VectorField> u_series, double dt);

}  // namespace cvf
