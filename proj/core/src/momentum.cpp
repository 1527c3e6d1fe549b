#include "cvf/momentum.hpp"

#include <cmath>
#include <string>

#include "cvf/errors.hpp"
#include "cvf/operators.hpp"

namespace cvf {

namespace {

struct Parts {
  std::array<SpectralBuffer, 3> advection, pressure, elastic;
};

// Spectral coefficients of the three contributions. Constant parts of the
// pressure and stress are removed before transforming so that equilibrium
// data yields exact zeros.
Parts spectral_parts(SpectralWorkspace& ws, const ScalarField& rho, const VectorField& u,
                     const TensorField& E, const PhysParams& params) {
  require_positive_density(rho, "assemble_rhs");
  const std::size_t n = rho.points();
  const std::size_t M = ws.modes();
  const double inv_nu2 = params.inv_nu2();
  Parts out;
  for (int c = 0; c < 3; ++c) {
    out.advection[c].assign(M, Complex{});
    out.pressure[c].assign(M, Complex{});
    out.elastic[c].assign(M, Complex{});
  }
  AlignedVector buf(n);
  SpectralBuffer hat(M), d(M);

  const TensorField J = jacobian(ws, u);
  for (int i = 0; i < 3; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      double s = 0.0;
      for (int l = 0; l < 3; ++l) s += u(static_cast<std::size_t>(l), p) * J(static_cast<std::size_t>(3 * i + l), p);
      buf[p] = -rho[p] * s;
    }
    ws.forward(buf, out.advection[i]);
    ws.apply_dealias(out.advection[i]);
  }

  for (std::size_t p = 0; p < n; ++p) buf[p] = std::pow(rho[p], params.gamma) - 1.0;
  ws.forward(buf, hat);
  ws.apply_dealias(hat);
  for (int a = 0; a < 3; ++a) {
    ws.differentiate(hat, a, d);
    for (std::size_t m = 0; m < M; ++m) out.pressure[a][m] = -inv_nu2 * d[m];
  }

  // rho F F^T - I = (rho - 1) I + rho (E + E^T + E E^T), symmetric.
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      for (std::size_t p = 0; p < n; ++p) {
        double s = E(static_cast<std::size_t>(3 * i + j), p) + E(static_cast<std::size_t>(3 * j + i), p);
        for (int l = 0; l < 3; ++l) {
          s += E(static_cast<std::size_t>(3 * i + l), p) * E(static_cast<std::size_t>(3 * j + l), p);
        }
        buf[p] = rho[p] * s + (i == j ? rho[p] - 1.0 : 0.0);
      }
      ws.forward(buf, hat);
      ws.apply_dealias(hat);
      ws.differentiate(hat, j, d);
      for (std::size_t m = 0; m < M; ++m) out.elastic[i][m] += inv_nu2 * d[m];
      if (j != i) {
        ws.differentiate(hat, i, d);
        for (std::size_t m = 0; m < M; ++m) out.elastic[j][m] += inv_nu2 * d[m];
      }
    }
  }
  return out;
}

}  // namespace

void MomentumOptions::validate() const {
  if (!(theta >= 0.5 && theta <= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "theta must lie in [0.5, 1], got " + std::to_string(theta));
  }
  if (density_lagging != DensityLagging::FreezeRho &&
      density_lagging != DensityLagging::RhoWeighted) {
    throw Error(ErrorCode::InvalidParams, "unknown density lagging mode");
  }
}

MomentumRhs assemble_rhs(SpectralWorkspace& ws, const FlowState& state, const PhysParams& params) {
  Parts parts = spectral_parts(ws, state.rho, state.u, state.E, params);
  const Grid& g = state.grid();
  MomentumRhs r{VectorField(g), VectorField(g), VectorField(g), VectorField(g)};
  for (int c = 0; c < 3; ++c) {
    ws.inverse(parts.advection[c], r.advection.comp(c));
    ws.inverse(parts.pressure[c], r.pressure.comp(c));
    ws.inverse(parts.elastic[c], r.elastic.comp(c));
  }
  for (int c = 0; c < 3; ++c) {
    for (std::size_t m = 0; m < ws.modes(); ++m) {
      parts.advection[c][m] += parts.pressure[c][m] + parts.elastic[c][m];
    }
    ws.inverse(parts.advection[c], r.f.comp(c));
  }
  return r;
}

VectorField momentum_forcing(SpectralWorkspace& ws, const ScalarField& rho, const VectorField& u,
                             const TensorField& E, const PhysParams& params) {
  Parts parts = spectral_parts(ws, rho, u, E, params);
  VectorField f(rho.grid());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t m = 0; m < ws.modes(); ++m) {
      parts.advection[c][m] += parts.pressure[c][m] + parts.elastic[c][m];
    }
    ws.inverse(parts.advection[c], f.comp(c));
  }
  return f;
}

VectorField advance_velocity(SpectralWorkspace& ws, const VectorField& u, const VectorField& f,
                             double dt, double rho_bar, const PhysParams& params,
                             const MomentumOptions& opts) {
  check_lame_params(params.mu, params.lambda);
  opts.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidParams, "advance_velocity: dt must be positive");
  }
  if (!(rho_bar > 0.0) || !std::isfinite(rho_bar)) {
    throw Error(ErrorCode::InvalidParams, "advance_velocity: rho_bar must be positive");
  }
  const double mu = params.mu;
  const double ml = params.mu + params.lambda;
  const double th = opts.theta;
  const double r = rho_bar / dt;

  std::array<SpectralBuffer, 3> uh, fh;
  for (int c = 0; c < 3; ++c) {
    uh[c] = ws.forward(u.comp(c));
    fh[c] = ws.forward(f.comp(c));
  }
  for (std::size_t m = 0; m < ws.modes(); ++m) {
    const auto k = ws.wavevector(m);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) {
      for (int c = 0; c < 3; ++c) uh[c][m] += fh[c][m] * (dt / rho_bar);
      continue;
    }
    const Complex ku = k[0] * uh[0][m] + k[1] * uh[1][m] + k[2] * uh[2][m];
    std::array<Complex, 3> b;
    for (int c = 0; c < 3; ++c) {
      const Complex Au = mu * k2 * uh[c][m] + ml * k[c] * ku;
      b[c] = r * uh[c][m] + fh[c][m] - (1.0 - th) * Au;
    }
    // (alpha I + beta k k^T)^{-1} = (I - beta k k^T / (alpha + beta |k|^2)) / alpha
    const double alpha = r + th * mu * k2;
    const double beta = th * ml;
    const double denom = alpha + beta * k2;
    if (!(alpha > 0.0) || !(denom > 0.0)) {
      throw Error(ErrorCode::SingularSystem, "per-mode Lame system is not positive definite");
    }
    const Complex kb = k[0] * b[0] + k[1] * b[1] + k[2] * b[2];
    for (int c = 0; c < 3; ++c) uh[c][m] = (b[c] - (beta / denom) * k[c] * kb) / alpha;
  }
  VectorField out(u.grid());
  for (int c = 0; c < 3; ++c) ws.inverse(uh[c], out.comp(c));
  return out;
}

VectorField advance_velocity(SpectralWorkspace& ws, const FlowState& state, const MomentumRhs& rhs,
                             double dt, const PhysParams& params, const MomentumOptions& opts) {
  return advance_velocity(ws, state.u, rhs.f, dt, mean(state.rho), params, opts);
}

}  // namespace cvf
