/// @file diagnostics.hpp
/// @brief Energy balance, constraint residuals, conserved integrals and
/// L^q / W^{1,q} surrogate norms for a flow state.
///
/// All functions are pure: the same state gives the same numbers bitwise.
/// Time derivatives needed by residual checks come from second-order central
/// differences over saved states, never from solver internals.
#pragma once

#include <span>

#include "cvf/field.hpp"
#include "cvf/spectral.hpp"
#include "cvf/state.hpp"

namespace cvf {

struct NormSpec {
  double q = 4.0;  ///< exponent of the L^q / W^{1,q} surrogates, q > 3
  void validate() const;
};

struct EnergyComponents {
  double kinetic = 0.0;    ///< int 1/2 rho |u|^2
  double elastic_E = 0.0;  ///< int 1/2 rho |E|^2
  double elastic_F = 0.0;  ///< int 1/2 rho |I + E|^2
  double pressure = 0.0;   ///< int (rho^g - g rho + g - 1)/(g - 1)

  /// Conserved energy of the (possibly nu-scaled) system in E form.
  double total(const PhysParams& p) const noexcept {
    return kinetic + p.inv_nu2() * (elastic_E + pressure);
  }
};

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double e_kin = 0.0;
  double e_elastic_E = 0.0;
  double e_elastic_F = 0.0;
  double e_press = 0.0;
  double diss_rate = 0.0;
  double diss_cum = 0.0;
  double balance_res = 0.0;
  double curl_linf = 0.0;
  double curl_l2 = 0.0;
  double piola_l2 = 0.0;
  double trace_int = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double sigma_lq = 0.0;
  double gradE_lq = 0.0;
  double E_w1q = 0.0;
  double Z_l2 = 0.0;
  long picard_iters = 0;
  double picard_ratio_max = 0.0;

  EnergyComponents energy() const noexcept { return {e_kin, e_elastic_E, e_elastic_F, e_press}; }

  friend bool operator==(const DiagnosticsRecord&, const DiagnosticsRecord&) = default;
};

EnergyComponents total_energy(const FlowState& state, const PhysParams& params);

/// int mu |grad u|^2 + (mu + lambda) |div u|^2, via Parseval.
double dissipation_rate(SpectralWorkspace& ws, const VectorField& u, const PhysParams& params);

/// |E(t) + D(t) - E(0)| / max(E(0), eps) between the first and last record.
/// Throws InsufficientHistory on an empty history.
double energy_balance_residual(std::span<const DiagnosticsRecord> history,
                               const PhysParams& params);

struct ResidualNorms {
  double linf = 0.0;
  double l2 = 0.0;  ///< root-mean-square over grid points and tensor entries
};

/// Residual of d_k E_ij + E_lk d_l E_ij - d_j E_ik - E_lj d_l E_ik.
ResidualNorms curl_compatibility_residual(SpectralWorkspace& ws, const TensorField& E);

/// L2 norm of the vector field d_j (rho (I + E)_ji).
double piola_residual(SpectralWorkspace& ws, const ScalarField& rho, const TensorField& E);

/// int rho tr E.
double trace_integral(const ScalarField& rho, const TensorField& E);

struct DissipationCombination {
  VectorField Z;    ///< u - lame_solve(div E)
  double l2 = 0.0;  ///< ||Z||_{L2}
  double h1 = 0.0;  ///< sqrt(||Z||_{L2}^2 + ||grad Z||_{L2}^2)
};

DissipationCombination dissipation_combination(SpectralWorkspace& ws, const FlowState& state,
                                               const PhysParams& params);

/// L2 norm of the divergence-of-momentum identity
///   nu^-2 Lap(P + rho) = nu^-2 div div(rho E E^T) - div(rho u.grad u)
///                        - div(rho d_t u) + (lambda + 2 mu) Lap div u
/// at the middle of three consecutive states spaced dt apart.
double elliptic_pressure_residual(SpectralWorkspace& ws, std::span<const FlowState> states,
                                  double dt, const PhysParams& params);

/// L2 norm of d_t(rho tr E) + div(rho u tr E) at the middle of three states.
/// Logged, not asserted.
double trace_transport_residual(SpectralWorkspace& ws, std::span<const FlowState> states,
                                double dt);

struct NormsReport {
  double sigma_lq = 0.0;     ///< ||grad ln rho||_{L^q}
  double grad_rho_lq = 0.0;  ///< ||grad rho||_{L^q}
  double grad_E_lq = 0.0;    ///< ||grad E||_{L^q}
  double E_lq = 0.0;
  double E_w1q = 0.0;
  double rho_w1q = 0.0;  ///< ||rho - 1||_{W^{1,q}}
};

NormsReport norms(SpectralWorkspace& ws, const FlowState& state, const NormSpec& spec);

/// One-shot record of every instantaneous quantity. Cumulative fields
/// (diss_cum, balance_res, picard_*) are left at zero.
DiagnosticsRecord diagnose(SpectralWorkspace& ws, const FlowState& state, const PhysParams& params,
                           const NormSpec& spec);

}  // namespace cvf
