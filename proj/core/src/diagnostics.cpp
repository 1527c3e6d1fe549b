#include "cvf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvf/errors.hpp"
#include "cvf/operators.hpp"

namespace cvf {

namespace {

constexpr double kBalanceFloor = 1e-30;

// d[l] holds d_l E, i.e. d[l](i,j) = d E_ij / d x_l.
struct TensorGradient {
  std::array<TensorField, 3> d;
  explicit TensorGradient(const Grid& g) : d{TensorField(g), TensorField(g), TensorField(g)} {}
};

TensorGradient tensor_gradient(SpectralWorkspace& ws, const TensorField& E) {
  TensorGradient g(E.grid());
  SpectralBuffer hat(ws.modes()), tmp(ws.modes());
  for (std::size_t c = 0; c < 9; ++c) {
    ws.forward(E.comp(c), hat);
    for (int l = 0; l < 3; ++l) {
      ws.differentiate(hat, l, tmp);
      ws.inverse(tmp, g.d[l].comp(c));
    }
  }
  return g;
}

ResidualNorms curl_residual_from(SpectralWorkspace& ws, const TensorField& E,
                                 const TensorGradient& g) {
  const std::size_t n = E.points();
  AlignedVector lin(n), prod(n);
  SpectralBuffer hat(ws.modes());
  ResidualNorms r;
  double sumsq = 0.0;
  static constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int i = 0; i < 3; ++i) {
    for (const auto& jk : kPairs) {
      const int j = jk[0], k = jk[1];
      const auto dk_Eij = g.d[k].comp(i, j);
      const auto dj_Eik = g.d[j].comp(i, k);
      for (std::size_t p = 0; p < n; ++p) {
        lin[p] = dk_Eij[p] - dj_Eik[p];
        double s = 0.0;
        for (int l = 0; l < 3; ++l) {
          s += E(3 * l + k, p) * g.d[l](3 * i + j, p) - E(3 * l + j, p) * g.d[l](3 * i + k, p);
        }
        prod[p] = s;
      }
      ws.forward(prod, hat);
      ws.apply_dealias(hat);
      ws.inverse(hat, prod);
      for (std::size_t p = 0; p < n; ++p) {
        const double v = lin[p] + prod[p];
        r.linf = std::max(r.linf, std::abs(v));
        sumsq += v * v;
      }
    }
  }
  // Each (j<k) entry appears twice in the antisymmetric 27-entry tensor.
  r.l2 = std::sqrt(2.0 * sumsq / (27.0 * static_cast<double>(n)));
  return r;
}

double lq_of_pointwise(std::span<const double> pointwise_norm_sq, double q, const Grid& grid) {
  double s = 0.0;
  for (double x : pointwise_norm_sq) s += std::pow(x, q / 2.0);
  return std::pow(s * grid.cell_volume(), 1.0 / q);
}

NormsReport norms_from(SpectralWorkspace& ws, const FlowState& st, const NormSpec& spec,
                       const TensorGradient& g) {
  const Grid& grid = st.grid();
  const std::size_t n = grid.size();
  const double q = spec.q;
  NormsReport r;

  ScalarField logrho(grid);
  for (std::size_t p = 0; p < n; ++p) logrho[p] = std::log(st.rho[p]);
  const VectorField sigma = gradient(ws, logrho);
  const VectorField grad_rho = gradient(ws, st.rho);

  AlignedVector a(n), b(n), c(n), e(n), rr(n);
  for (std::size_t p = 0; p < n; ++p) {
    double ss = 0.0, gr = 0.0;
    for (int k = 0; k < 3; ++k) {
      ss += sigma(k, p) * sigma(k, p);
      gr += grad_rho(k, p) * grad_rho(k, p);
    }
    a[p] = ss;
    b[p] = gr;
    double ge = 0.0, ee = 0.0;
    for (std::size_t comp = 0; comp < 9; ++comp) {
      ee += st.E(comp, p) * st.E(comp, p);
      for (int l = 0; l < 3; ++l) ge += g.d[l](comp, p) * g.d[l](comp, p);
    }
    c[p] = ge;
    e[p] = ee;
    const double d = st.rho[p] - 1.0;
    rr[p] = d * d;
  }
  r.sigma_lq = lq_of_pointwise(a, q, grid);
  r.grad_rho_lq = lq_of_pointwise(b, q, grid);
  r.grad_E_lq = lq_of_pointwise(c, q, grid);
  r.E_lq = lq_of_pointwise(e, q, grid);
  r.E_w1q = std::pow(std::pow(r.E_lq, q) + std::pow(r.grad_E_lq, q), 1.0 / q);
  const double rho_lq = lq_of_pointwise(rr, q, grid);
  r.rho_w1q = std::pow(std::pow(rho_lq, q) + std::pow(r.grad_rho_lq, q), 1.0 / q);
  return r;
}

void require_history(std::span<const FlowState> states, const char* where) {
  if (states.size() != 3) {
    throw Error(ErrorCode::InsufficientHistory,
                std::string(where) + ": needs exactly 3 consecutive states, got " +
                    std::to_string(states.size()));
  }
}

}  // namespace

void NormSpec::validate() const {
  if (!std::isfinite(q) || !(q > 3.0)) {
    throw Error(ErrorCode::InvalidParams, "norm exponent q must be > 3");
  }
}

EnergyComponents total_energy(const FlowState& st, const PhysParams& params) {
  require_positive_density(st.rho, "total_energy");
  EnergyComponents e;
  const std::size_t n = st.grid().size();
  for (std::size_t p = 0; p < n; ++p) {
    const double r = st.rho[p];
    double u2 = 0.0;
    for (int k = 0; k < 3; ++k) u2 += st.u(k, p) * st.u(k, p);
    double e2 = 0.0, f2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double x = st.E(3 * i + j, p);
        const double f = x + (i == j ? 1.0 : 0.0);
        e2 += x * x;
        f2 += f * f;
      }
    }
    e.kinetic += 0.5 * r * u2;
    e.elastic_E += 0.5 * r * e2;
    e.elastic_F += 0.5 * r * f2;
    e.pressure += pressure_potential(r, params.gamma);
  }
  const double dv = st.grid().cell_volume();
  e.kinetic *= dv;
  e.elastic_E *= dv;
  e.elastic_F *= dv;
  e.pressure *= dv;
  return e;
}

double dissipation_rate(SpectralWorkspace& ws, const VectorField& u, const PhysParams& params) {
  std::array<SpectralBuffer, 3> hat;
  for (int c = 0; c < 3; ++c) hat[c] = ws.forward(u.comp(c));
  const std::size_t nxh = static_cast<std::size_t>(ws.nxh());
  const std::size_t last = static_cast<std::size_t>(u.grid().nx() / 2);
  const double ml = params.mu + params.lambda;
  double s = 0.0;
  for (std::size_t m = 0; m < ws.modes(); ++m) {
    const auto k = ws.wavevector(m);
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const Complex kd = k[0] * hat[0][m] + k[1] * hat[1][m] + k[2] * hat[2][m];
    const double u2 = std::norm(hat[0][m]) + std::norm(hat[1][m]) + std::norm(hat[2][m]);
    const double w = (m % nxh == 0 || m % nxh == last) ? 1.0 : 2.0;
    s += w * (params.mu * k2 * u2 + ml * std::norm(kd));
  }
  return s * u.grid().volume();
}

double energy_balance_residual(std::span<const DiagnosticsRecord> history,
                               const PhysParams& params) {
  if (history.empty()) {
    throw Error(ErrorCode::InsufficientHistory, "energy_balance_residual: empty history");
  }
  const double e0 = history.front().energy().total(params);
  const auto& last = history.back();
  const double num =
      std::abs(last.energy().total(params) + last.diss_cum - history.front().diss_cum - e0);
  return num / std::max(e0, kBalanceFloor);
}

ResidualNorms curl_compatibility_residual(SpectralWorkspace& ws, const TensorField& E) {
  return curl_residual_from(ws, E, tensor_gradient(ws, E));
}

double piola_residual(SpectralWorkspace& ws, const ScalarField& rho, const TensorField& E) {
  const std::size_t n = rho.points();
  AlignedVector prod(n);
  SpectralBuffer hat(ws.modes()), d(ws.modes()), acc(ws.modes());
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    std::fill(acc.begin(), acc.end(), Complex{});
    for (int j = 0; j < 3; ++j) {
      const auto Eji = E.comp(j, i);
      const double delta = (i == j) ? 1.0 : 0.0;
      for (std::size_t p = 0; p < n; ++p) prod[p] = rho[p] * (delta + Eji[p]);
      ws.forward(prod, hat);
      ws.apply_dealias(hat);
      ws.differentiate(hat, j, d);
      for (std::size_t m = 0; m < ws.modes(); ++m) acc[m] += d[m];
    }
    total += ws.mean_square(acc);
  }
  return std::sqrt(total * rho.grid().volume());
}

double trace_integral(const ScalarField& rho, const TensorField& E) {
  double s = 0.0;
  for (std::size_t p = 0; p < rho.points(); ++p) {
    s += rho[p] * (E(0, p) + E(4, p) + E(8, p));
  }
  return s * rho.grid().cell_volume();
}

DissipationCombination dissipation_combination(SpectralWorkspace& ws, const FlowState& st,
                                               const PhysParams& params) {
  const VectorField divE = divergence(ws, st.E);
  VectorField Z = st.u - lame_solve(ws, divE, params.mu, params.lambda);
  DissipationCombination out{std::move(Z), 0.0, 0.0};
  std::array<SpectralBuffer, 3> hat;
  double l2 = 0.0, grad2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    hat[c] = ws.forward(out.Z.comp(c));
    l2 += ws.mean_square(hat[c]);
    for (std::size_t m = 0; m < ws.modes(); ++m) {
      const auto k = ws.wavevector(m);
      hat[c][m] *= std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    }
    grad2 += ws.mean_square(hat[c]);
  }
  const double V = st.grid().volume();
  out.l2 = std::sqrt(l2 * V);
  out.h1 = std::sqrt((l2 + grad2) * V);
  return out;
}

double elliptic_pressure_residual(SpectralWorkspace& ws, std::span<const FlowState> states,
                                  double dt, const PhysParams& params) {
  require_history(states, "elliptic_pressure_residual");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "elliptic_pressure_residual: dt <= 0");
  const FlowState& s = states[1];
  require_positive_density(s.rho, "elliptic_pressure_residual");
  const Grid& grid = s.grid();
  const std::size_t n = grid.size();
  const std::size_t M = ws.modes();
  const double inv_nu2 = params.inv_nu2();
  const TensorField J = jacobian(ws, s.u);

  AlignedVector buf(n);
  SpectralBuffer hat(M), acc(M, Complex{});
  auto project = [&](auto&& fill, bool masked) {
    for (std::size_t p = 0; p < n; ++p) buf[p] = fill(p);
    ws.forward(buf, hat);
    if (masked) ws.apply_dealias(hat);
  };

  // LHS: nu^-2 Lap(P + rho)
  const ScalarField P = pressure(s.rho, params.gamma);
  project([&](std::size_t p) { return P[p] + s.rho[p]; }, false);
  for (std::size_t m = 0; m < M; ++m) {
    const auto k = ws.wavevector(m);
    acc[m] += -(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * inv_nu2 * hat[m];
  }
  // -nu^-2 div div (rho E E^T): symbol -k_i k_j
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      project(
          [&](std::size_t p) {
            double v = 0.0;
            for (int l = 0; l < 3; ++l) v += s.E(3 * i + l, p) * s.E(3 * j + l, p);
            return s.rho[p] * v;
          },
          true);
      const double mult = (i == j) ? 1.0 : 2.0;
      for (std::size_t m = 0; m < M; ++m) {
        const auto k = ws.wavevector(m);
        acc[m] -= -mult * k[i] * k[j] * inv_nu2 * hat[m];
      }
    }
  }
  // + div(rho u.grad u) + div(rho d_t u)
  for (int i = 0; i < 3; ++i) {
    project(
        [&](std::size_t p) {
          double adv = 0.0;
          for (int l = 0; l < 3; ++l) adv += s.u(l, p) * J(3 * i + l, p);
          const double ut = (states[2].u(i, p) - states[0].u(i, p)) / (2.0 * dt);
          return s.rho[p] * (adv + ut);
        },
        true);
    for (std::size_t m = 0; m < M; ++m) {
      const auto k = ws.wavevector(m);
      acc[m] += Complex(0.0, k[i]) * hat[m];
    }
  }
  // - (lambda + 2 mu) Lap div u: symbol -(lambda+2mu)(-k^2)(i k.u)
  {
    std::array<SpectralBuffer, 3> uh;
    for (int c = 0; c < 3; ++c) uh[c] = ws.forward(s.u.comp(c));
    const double c2 = params.lambda + 2.0 * params.mu;
    for (std::size_t m = 0; m < M; ++m) {
      const auto k = ws.wavevector(m);
      const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
      const Complex divu = Complex(0.0, 1.0) * (k[0] * uh[0][m] + k[1] * uh[1][m] + k[2] * uh[2][m]);
      acc[m] -= c2 * (-k2) * divu;
    }
  }
  return std::sqrt(ws.mean_square(acc) * grid.volume());
}

double trace_transport_residual(SpectralWorkspace& ws, std::span<const FlowState> states,
                                double dt) {
  require_history(states, "trace_transport_residual");
  const FlowState& s = states[1];
  const std::size_t n = s.grid().size();
  auto rho_tr = [](const FlowState& st, std::size_t p) {
    return st.rho[p] * (st.E(0, p) + st.E(4, p) + st.E(8, p));
  };
  VectorField flux(s.grid());
  for (std::size_t p = 0; p < n; ++p) {
    const double rt = rho_tr(s, p);
    for (int k = 0; k < 3; ++k) flux(k, p) = s.u(k, p) * rt;
  }
  dealias(ws, flux);
  ScalarField r = divergence(ws, flux);
  for (std::size_t p = 0; p < n; ++p) {
    r[p] += (rho_tr(states[2], p) - rho_tr(states[0], p)) / (2.0 * dt);
  }
  return l2_norm(r);
}

NormsReport norms(SpectralWorkspace& ws, const FlowState& state, const NormSpec& spec) {
  spec.validate();
  require_positive_density(state.rho, "norms");
  return norms_from(ws, state, spec, tensor_gradient(ws, state.E));
}

DiagnosticsRecord diagnose(SpectralWorkspace& ws, const FlowState& st, const PhysParams& params,
                           const NormSpec& spec) {
  spec.validate();
  require_positive_density(st.rho, "diagnose");
  DiagnosticsRecord r;
  r.t = st.t;
  r.mass = integrate(st.rho.data(), st.grid());
  const EnergyComponents e = total_energy(st, params);
  r.e_kin = e.kinetic;
  r.e_elastic_E = e.elastic_E;
  r.e_elastic_F = e.elastic_F;
  r.e_press = e.pressure;
  r.diss_rate = dissipation_rate(ws, st.u, params);

  const TensorGradient g = tensor_gradient(ws, st.E);
  const ResidualNorms curl = curl_residual_from(ws, st.E, g);
  r.curl_linf = curl.linf;
  r.curl_l2 = curl.l2;
  r.piola_l2 = piola_residual(ws, st.rho, st.E);
  r.trace_int = trace_integral(st.rho, st.E);
  const auto [lo, hi] = std::minmax_element(st.rho.data().begin(), st.rho.data().end());
  r.rho_min = *lo;
  r.rho_max = *hi;
  const NormsReport nr = norms_from(ws, st, spec, g);
  r.sigma_lq = nr.sigma_lq;
  r.gradE_lq = nr.grad_E_lq;
  r.E_w1q = nr.E_w1q;
  r.Z_l2 = dissipation_combination(ws, st, params).l2;
  return r;
}

}  // namespace cvf
