#include "cvf/verification/fd_reference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvf/errors.hpp"

namespace cvf {

namespace {

class Stencil {
 public:
  explicit Stencil(const Grid& g) : g_(g) {}

  // Central first derivative along axis a at flat index p.
  double d(std::span<const double> f, int a, int ix, int iy, int iz) const {
    std::array<int, 3> lo = {ix, iy, iz}, hi = {ix, iy, iz};
    const int n = g_.n()[a];
    hi[a] = (hi[a] + 1) % n;
    lo[a] = (lo[a] + n - 1) % n;
    return (f[g_.index(hi[0], hi[1], hi[2])] - f[g_.index(lo[0], lo[1], lo[2])]) /
           (2.0 * g_.spacing()[a]);
  }

  double lap(std::span<const double> f, int ix, int iy, int iz) const {
    const double c = f[g_.index(ix, iy, iz)];
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
      std::array<int, 3> lo = {ix, iy, iz}, hi = {ix, iy, iz};
      const int n = g_.n()[a];
      hi[a] = (hi[a] + 1) % n;
      lo[a] = (lo[a] + n - 1) % n;
      const double h = g_.spacing()[a];
      s += (f[g_.index(hi[0], hi[1], hi[2])] - 2.0 * c + f[g_.index(lo[0], lo[1], lo[2])]) / (h * h);
    }
    return s;
  }

 private:
  const Grid& g_;
};

template <typename Fn>
void for_each_point(const Grid& g, Fn&& fn) {
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iy = 0; iy < g.ny(); ++iy) {
      for (int ix = 0; ix < g.nx(); ++ix) fn(ix, iy, iz, g.index(ix, iy, iz));
    }
  }
}

}  // namespace

void OracleConfig::validate() const {
  if (n < 4 || n > 16 || n % 2 != 0) {
    throw Error(ErrorCode::InvalidGrid, "oracle resolution must be even and in [4, 16]");
  }
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "oracle dt must be positive");
  if (steps < 0) throw Error(ErrorCode::InvalidParams, "oracle steps must be >= 0");
}

FlowState fd_reference_step(const FlowState& s, double dt, const PhysParams& params,
                            const OracleConfig& cfg) {
  cfg.validate();
  params.validate();
  const Grid& g = s.grid();
  if (g.nx() > 16 || g.ny() > 16 || g.nz() > 16) {
    throw Error(ErrorCode::InvalidGrid, "oracle grid exceeds 16 points per axis");
  }
  require_positive_density(s.rho, "fd_reference_step");
  const double h = g.min_spacing();
  const double umax = max_pointwise_norm(s.u);
  if (umax * dt / h > 0.5) {
    throw Error(ErrorCode::CflViolation, "oracle advective CFL exceeded");
  }
  double rho_min = s.rho[0];
  for (double r : s.rho.data()) rho_min = std::min(rho_min, r);
  const double visc = (2.0 * params.mu + std::abs(params.lambda)) * dt / (rho_min * h * h);
  if (visc > 1.0 / 6.0) throw Error(ErrorCode::CflViolation, "oracle viscous limit exceeded");

  const Stencil D(g);
  const double inv_nu2 = params.inv_nu2();
  const double ml = params.mu + params.lambda;

  // Auxiliary pointwise fields.
  VectorField flux(g);
  ScalarField P(g), divu(g);
  TensorField S(g);  // rho F F^T
  TensorField J(g);  // grad u
  for_each_point(g, [&](int, int, int, std::size_t p) {
    for (std::size_t a = 0; a < 3; ++a) flux(a, p) = s.rho[p] * s.u(a, p);
    P[p] = std::pow(s.rho[p], params.gamma);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        for (int k = 0; k < 3; ++k) {
          const double Fik = s.E(static_cast<std::size_t>(3 * i + k), p) + (i == k ? 1.0 : 0.0);
          const double Fjk = s.E(static_cast<std::size_t>(3 * j + k), p) + (j == k ? 1.0 : 0.0);
          v += Fik * Fjk;
        }
        S(static_cast<std::size_t>(3 * i + j), p) = s.rho[p] * v;
      }
    }
  });
  for_each_point(g, [&](int ix, int iy, int iz, std::size_t p) {
    double dv = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double v = D.d(s.u.comp(static_cast<std::size_t>(i)), j, ix, iy, iz);
        J(static_cast<std::size_t>(3 * i + j), p) = v;
        if (i == j) dv += v;
      }
    }
    divu[p] = dv;
  });

  FlowState out = s;
  out.t = s.t + dt;
  for_each_point(g, [&](int ix, int iy, int iz, std::size_t p) {
    double divflux = 0.0;
    for (int a = 0; a < 3; ++a) divflux += D.d(flux.comp(static_cast<std::size_t>(a)), a, ix, iy, iz);
    out.rho[p] = s.rho[p] - dt * divflux;

    for (int i = 0; i < 3; ++i) {
      const std::size_t ci = static_cast<std::size_t>(i);
      double adv = 0.0, divS = 0.0;
      for (int j = 0; j < 3; ++j) {
        adv += s.u(static_cast<std::size_t>(j), p) * J(static_cast<std::size_t>(3 * i + j), p);
        divS += D.d(S.comp(static_cast<std::size_t>(3 * i + j)), j, ix, iy, iz);
      }
      const double visc_term = params.mu * D.lap(s.u.comp(ci), ix, iy, iz) + ml * D.d(divu.comp(0), i, ix, iy, iz);
      const double force = -s.rho[p] * adv + visc_term - inv_nu2 * D.d(P.comp(0), i, ix, iy, iz) +
                           inv_nu2 * divS;
      out.u(ci, p) = s.u(ci, p) + dt * force / s.rho[p];
    }

    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const std::size_t c = static_cast<std::size_t>(3 * i + j);
        double v = J(c, p);
        for (int l = 0; l < 3; ++l) {
          v -= s.u(static_cast<std::size_t>(l), p) * D.d(s.E.comp(c), l, ix, iy, iz);
          v += J(static_cast<std::size_t>(3 * i + l), p) * s.E(static_cast<std::size_t>(3 * l + j), p);
        }
        out.E(c, p) = s.E(c, p) + dt * v;
      }
    }
  });
  for (double r : out.rho.data()) {
    if (!(r > 0.0)) throw Error(ErrorCode::PositivityLost, "oracle density lost positivity");
  }
  return out;
}

FlowState fd_reference_run(const FlowState& initial, const PhysParams& params,
                           const OracleConfig& cfg) {
  cfg.validate();
  FlowState s = initial;
  for (int k = 0; k < cfg.steps; ++k) s = fd_reference_step(s, cfg.dt, params, cfg);
  return s;
}

}  // namespace cvf
