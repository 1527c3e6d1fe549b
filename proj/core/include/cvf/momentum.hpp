/// @file momentum.hpp
/// @brief Momentum right-hand side and the theta-implicit Lame step.
#pragma once

#include "cvf/field.hpp"
#include "cvf/spectral.hpp"
#include "cvf/state.hpp"

namespace cvf {

/// How the constant density of the implicit operator is chosen inside a step.
enum class DensityLagging {
  FreezeRho,    ///< mean of rho at the start of the step
  RhoWeighted,  ///< midrange of the current rho iterate, refreshed every sweep
};

struct MomentumOptions {
  double theta = 1.0;  ///< implicitness of the Lame term, in [0.5, 1]
  DensityLagging density_lagging = DensityLagging::FreezeRho;

  void validate() const;
};

/// f = advection + pressure + elastic with
///   advection = -rho (u.grad) u
///   pressure  = -nu^-2 grad P(rho)
///   elastic   =  nu^-2 div(rho (I + E)(I + E)^T)
/// Every product is dealiased.
struct MomentumRhs {
  VectorField f;
  VectorField advection;
  VectorField pressure;
  VectorField elastic;
};

/// Throws NonPositiveDensity.
MomentumRhs assemble_rhs(SpectralWorkspace& ws, const FlowState& state, const PhysParams& params);

/// Only the total f.
VectorField momentum_forcing(SpectralWorkspace& ws, const ScalarField& rho, const VectorField& u,
                             const TensorField& E, const PhysParams& params);

/// Per Fourier mode solves
///   (rho_bar/dt I + theta A(k)) u' = rho_bar/dt u + f - (1 - theta) A(k) u
/// with A(k) = mu |k|^2 I + (mu + lambda) k k^T. Throws InvalidParams and
/// SingularSystem (the latter only if a per-mode matrix is not positive).
VectorField advance_velocity(SpectralWorkspace& ws, const VectorField& u, const VectorField& f,
                             double dt, double rho_bar, const PhysParams& params,
                             const MomentumOptions& opts);

/// rho_bar = mean(state.rho).
VectorField advance_velocity(SpectralWorkspace& ws, const FlowState& state, const MomentumRhs& rhs,
                             double dt, const PhysParams& params, const MomentumOptions& opts);

}  // namespace cvf
