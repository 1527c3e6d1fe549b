#include "cvf/verification/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "cvf/errors.hpp"

namespace cvf {

namespace {

// Value, gradient and Hessian of one mode table at (x, t), plus time derivative.
struct Jet {
  double v = 0.0;
  double vt = 0.0;
  std::array<double, 3> d{};
  std::array<double, 9> dd{};
};

Jet evaluate(const ModeTable& q, const std::array<double, 3>& x, double t, bool hessian) {
  Jet j;
  j.v = q.base.value(t);
  j.vt = q.base.derivative(t);
  for (const auto& term : q.terms) {
    const double arg = term.kappa[0] * x[0] + term.kappa[1] * x[1] + term.kappa[2] * x[2] + term.phase;
    const double s = std::sin(arg), c = std::cos(arg);
    const double a = term.amplitude.value(t);
    j.v += a * s;
    j.vt += term.amplitude.derivative(t) * s;
    for (int i = 0; i < 3; ++i) j.d[i] += a * term.kappa[i] * c;
    if (hessian) {
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) j.dd[3 * i + k] -= a * term.kappa[i] * term.kappa[k] * s;
      }
    }
  }
  return j;
}

void check_window(const ManufacturedSolution& sol, double t) {
  const double slack = 1e-12 * std::max(1.0, std::abs(sol.t_end));
  if (!(t >= sol.t_begin - slack && t <= sol.t_end + slack)) {
    throw Error(ErrorCode::OutOfWindow, "t = " + std::to_string(t) + " outside [" +
                                            std::to_string(sol.t_begin) + ", " +
                                            std::to_string(sol.t_end) + "]");
  }
}

void check_grid(const ManufacturedSolution& sol, const Grid& grid) {
  for (int a = 0; a < 3; ++a) {
    if (std::abs(grid.length()[a] - sol.length[a]) > 1e-12 * sol.length[a]) {
      throw Error(ErrorCode::InvalidGrid, "grid box does not match the manufactured solution");
    }
  }
}

template <typename Fn>
void for_each_point(const Grid& g, Fn&& fn) {
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iy = 0; iy < g.ny(); ++iy) {
      for (int ix = 0; ix < g.nx(); ++ix) {
        fn(std::array<double, 3>{g.coord(0, ix), g.coord(1, iy), g.coord(2, iz)},
           g.index(ix, iy, iz));
      }
    }
  }
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

void ManufacturedSolution::validate() const {
  if (!(t_end > t_begin)) throw Error(ErrorCode::InvalidParams, "manufactured window is empty");
  for (int i = 0; i <= 256; ++i) {
    const double t = t_begin + (t_end - t_begin) * i / 256.0;
    double lo = rho.base.value(t);
    for (const auto& term : rho.terms) lo -= std::abs(term.amplitude.value(t));
    if (!(lo > 0.0)) {
      throw Error(ErrorCode::InvalidParams, "manufactured density is not positive on its window");
    }
  }
}

FlowState ManufacturedSolution::exact(const Grid& grid, double t) const {
  check_grid(*this, grid);
  check_window(*this, t);
  FlowState s(grid);
  s.t = t;
  for_each_point(grid, [&](const std::array<double, 3>& x, std::size_t p) {
    s.rho[p] = evaluate(rho, x, t, false).v;
    for (std::size_t i = 0; i < 3; ++i) s.u(i, p) = evaluate(u[i], x, t, false).v;
    for (std::size_t c = 0; c < 9; ++c) s.E(c, p) = evaluate(E[c], x, t, false).v;
  });
  return s;
}

ForcingFields forcing_eval(const ManufacturedSolution& sol, double t, const Grid& grid,
                           const PhysParams& params) {
  check_grid(sol, grid);
  check_window(sol, t);
  ForcingFields out{ScalarField(grid), VectorField(grid), TensorField(grid)};
  const double inv_nu2 = params.inv_nu2();
  const double ml = params.mu + params.lambda;

  for_each_point(grid, [&](const std::array<double, 3>& x, std::size_t p) {
    const Jet r = evaluate(sol.rho, x, t, false);
    std::array<Jet, 3> U;
    for (int i = 0; i < 3; ++i) U[i] = evaluate(sol.u[i], x, t, true);
    std::array<Jet, 9> Ej;
    for (int c = 0; c < 9; ++c) Ej[c] = evaluate(sol.E[c], x, t, false);

    double divu = 0.0;
    for (int i = 0; i < 3; ++i) divu += U[i].d[i];

    // rho_t + u.grad rho + rho div u
    double grho = r.vt + r.v * divu;
    for (int a = 0; a < 3; ++a) grho += U[a].v * r.d[a];
    out.g_rho[p] = grho;

    // F = I + E and its derivatives
    auto F = [&](int i, int j) { return Ej[3 * i + j].v + (i == j ? 1.0 : 0.0); };
    auto dF = [&](int i, int j, int l) { return Ej[3 * i + j].d[l]; };

    const double dP = params.gamma * std::pow(r.v, params.gamma - 1.0);
    for (int i = 0; i < 3; ++i) {
      double adv = 0.0, lap = 0.0, graddiv = 0.0;
      for (int l = 0; l < 3; ++l) {
        adv += U[l].v * U[i].d[l];
        lap += U[i].dd[3 * l + l];
        graddiv += U[l].dd[3 * l + i];
      }
      // d_j (rho F_ik F_jk)
      double divS = 0.0;
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          divS += r.d[j] * F(i, k) * F(j, k) + r.v * dF(i, k, j) * F(j, k) +
                  r.v * F(i, k) * dF(j, k, j);
        }
      }
      out.g_u(static_cast<std::size_t>(i), p) = r.v * U[i].vt + r.v * adv - params.mu * lap -
                                                ml * graddiv + inv_nu2 * dP * r.d[i] -
                                                inv_nu2 * divS;
    }

    // E_t + u.grad E - grad u E - grad u
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int c = 3 * i + j;
        double v = Ej[c].vt - U[i].d[j];
        for (int l = 0; l < 3; ++l) {
          v += U[l].v * Ej[c].d[l];
          v -= U[i].d[l] * Ej[3 * l + j].v;
        }
        out.g_E(static_cast<std::size_t>(c), p) = v;
      }
    }
  });
  return out;
}

ManufacturedSolution equilibrium_solution(double length, double t_end) {
  ManufacturedSolution s;
  s.length = {length, length, length};
  s.rho.base.c = {1.0, 0.0, 0.0, 0.0};
  s.t_end = t_end;
  return s;
}

ManufacturedSolution trig_solution(double length, double amplitude, double t_end,
                                   std::uint64_t seed) {
  ManufacturedSolution s = equilibrium_solution(length, t_end);
  std::mt19937_64 rng(seed);
  const double k0 = 2.0 * std::numbers::pi / length;
  static constexpr std::array<std::array<int, 3>, 5> kModes = {
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, -1}}};

  auto fill = [&](ModeTable& q, int nterms) {
    for (int n = 0; n < nterms; ++n) {
      const auto& m = kModes[static_cast<std::size_t>(rng() % kModes.size())];
      TrigTerm term;
      term.kappa = {k0 * m[0], k0 * m[1], k0 * m[2]};
      term.phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
      for (auto& c : term.amplitude.c) c = amplitude * uniform(rng, -1.0, 1.0);
      term.amplitude.c[0] = amplitude * uniform(rng, 0.5, 1.0);
      q.terms.push_back(term);
    }
  };
  fill(s.rho, 2);
  for (auto& q : s.u) fill(q, 2);
  for (auto& q : s.E) fill(q, 1);
  s.validate();
  return s;
}

ManufacturedSolution scaled(const ManufacturedSolution& sol, double nu) {
  if (!(nu > 0.0)) throw Error(ErrorCode::InvalidParams, "scaling nu must be positive");
  ManufacturedSolution s = sol;
  const double nu2 = nu * nu;
  for (int a = 0; a < 3; ++a) s.length[a] = sol.length[a] * nu;
  s.t_begin = sol.t_begin * nu2;
  s.t_end = sol.t_end * nu2;
  auto rescale_time = [&](CubicPoly& p, double factor) {
    double f = factor;
    for (auto& c : p.c) {
      c *= f;
      f /= nu2;
    }
  };
  auto rescale = [&](ModeTable& q, double factor) {
    rescale_time(q.base, factor);
    for (auto& term : q.terms) {
      for (auto& k : term.kappa) k /= nu;
      rescale_time(term.amplitude, factor);
    }
  };
  rescale(s.rho, 1.0);
  for (auto& q : s.u) rescale(q, 1.0 / nu);
  for (auto& q : s.E) rescale(q, 1.0);
  return s;
}

}  // namespace cvf
