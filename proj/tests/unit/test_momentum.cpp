#include <doctest.h>

#include <cmath>

#include "cvf/errors.hpp"
#include "cvf/momentum.hpp"
#include "cvf/operators.hpp"
#include "test_support.hpp"

using namespace cvf;
using namespace cvf::test;

namespace {

template <typename Fn>
ErrorCode code_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

// -rho u.grad u - grad rho^gamma + div(rho F F^T) with central differences.
VectorField fd_forcing(const FlowState& s, const PhysParams& p) {
  const Grid& g = s.grid();
  VectorField f(g);
  TensorField grad_u(g);
  for (std::size_t i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto d = central_difference(s.u, i, j);
      std::copy(d.data().begin(), d.data().end(), grad_u.comp(i, static_cast<std::size_t>(j)).begin());
    }
  ScalarField P(g);
  for (std::size_t q = 0; q < g.size(); ++q) P[q] = std::pow(s.rho[q], p.gamma);
  TensorField stress(g);
  for (std::size_t q = 0; q < g.size(); ++q) {
    double F[9];
    for (int c = 0; c < 9; ++c) F[c] = s.E(static_cast<std::size_t>(c), q) + (c % 4 == 0 ? 1.0 : 0.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double v = 0.0;
        for (int k = 0; k < 3; ++k) v += F[3 * i + k] * F[3 * j + k];
        stress(static_cast<std::size_t>(3 * i + j), q) = s.rho[q] * v;
      }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const auto dP = central_difference(P, 0, static_cast<int>(i));
    for (std::size_t q = 0; q < g.size(); ++q) {
      double adv = 0.0;
      for (std::size_t j = 0; j < 3; ++j) adv += s.u(j, q) * grad_u(3 * i + j, q);
      f(i, q) = -s.rho[q] * adv - p.inv_nu2() * dP[q];
    }
    for (int j = 0; j < 3; ++j) {
      const auto d = central_difference(stress, 3 * i + static_cast<std::size_t>(j), j);
      for (std::size_t q = 0; q < g.size(); ++q) f(i, q) += p.inv_nu2() * d[q];
    }
  }
  return f;
}

FlowState smooth_state(const Grid& g) {
  FlowState s(g);
  fill(s.rho, [](const Point& x) { return 1.0 + 0.02 * std::sin(x[0] + x[1]); });
  fill_comp(s.u, 0, [](const Point& x) { return 0.02 * std::cos(x[2]); });
  fill_comp(s.u, 1, [](const Point& x) { return 0.02 * std::sin(x[0]); });
  fill_comp(s.u, 2, [](const Point& x) { return 0.01 * std::sin(x[1] - x[2]); });
  fill_comp(s.E, 0, [](const Point& x) { return 0.02 * std::cos(x[0]); });
  fill_comp(s.E, 5, [](const Point& x) { return 0.01 * std::sin(x[2]); });
  fill_comp(s.E, 7, [](const Point& x) { return 0.01 * std::cos(x[1] + x[0]); });
  return s;
}

VectorField restrict_to(const VectorField& fine, const Grid& coarse) {
  VectorField out(coarse);
  const Grid& g = fine.grid();
  for (std::size_t c = 0; c < 3; ++c)
    for (int iz = 0; iz < coarse.nz(); ++iz)
      for (int iy = 0; iy < coarse.ny(); ++iy)
        for (int ix = 0; ix < coarse.nx(); ++ix)
          out(c, coarse.index(ix, iy, iz)) = fine(c, g.index(2 * ix, 2 * iy, 2 * iz));
  return out;
}

}  // namespace

TEST_SUITE("momentum rhs") {
  TEST_CASE("equilibrium has zero forcing") {
    const Grid g = Grid::cube(16);
    SpectralWorkspace ws(g);
    const auto rhs = assemble_rhs(ws, FlowState::equilibrium(g), PhysParams{});
    CHECK(max_abs(rhs.f) == 0.0);
    CHECK(max_abs(rhs.elastic) == 0.0);
    CHECK(max_abs(rhs.pressure) == 0.0);
  }

  TEST_CASE("one-dimensional elastic stress") {
    const Grid g = Grid::cube(16);
    SpectralWorkspace ws(g);
    const double eps = 0.05;
    FlowState s(g);
    fill_comp(s.E, 0, [&](const Point& x) { return eps * std::sin(x[0]); });
    const auto rhs = assemble_rhs(ws, s, PhysParams{});
    VectorField want(g);
    fill_comp(want, 0, [&](const Point& x) {
      return 2 * eps * std::cos(x[0]) * (1 + eps * std::sin(x[0]));
    });
    CHECK(max_diff(rhs.elastic, want) <= 1e-13);
    CHECK(max_diff(rhs.f, want) <= 1e-13);
    CHECK(max_abs(rhs.advection) == 0.0);
  }

  TEST_CASE("components add up to f and match momentum_forcing") {
    const Grid g = Grid::cube(16);
    SpectralWorkspace ws(g);
    const auto s = smooth_state(g);
    PhysParams p;
    p.nu = 1.5;
    const auto rhs = assemble_rhs(ws, s, p);
    VectorField sum = rhs.advection + rhs.pressure + rhs.elastic;
    CHECK(max_diff(sum, rhs.f) <= 1e-15);
    CHECK(max_diff(momentum_forcing(ws, s.rho, s.u, s.E, p), rhs.f) == 0.0);
  }

  TEST_CASE("matches a central-difference assembly at N = 8") {
    const Grid g8 = Grid::cube(8), g16 = Grid::cube(16);
    SpectralWorkspace ws(g8);
    const PhysParams p;
    const auto s8 = smooth_state(g8);
    const auto fd8 = fd_forcing(s8, p);
    const auto fd16 = fd_forcing(smooth_state(g16), p);
    const double est = 4.0 / 3.0 * max_diff(fd8, restrict_to(fd16, g8));
    CHECK(est > 0.0);
    CHECK(max_diff(assemble_rhs(ws, s8, p).f, fd8) <= 5.0 * est);
  }

  TEST_CASE("zero mode of f is the mean of the pointwise forcing") {
    const Grid g = Grid::cube(16);
    SpectralWorkspace ws(g);
    const auto s = smooth_state(g);
    const auto f = assemble_rhs(ws, s, PhysParams{}).f;
    const auto fd = fd_forcing(s, PhysParams{});
    for (std::size_t c = 0; c < 3; ++c) {
      // The divergence terms are mean-free; only -rho u.grad u survives.
      const auto hat = ws.forward(f.comp(c));
      double adv_mean = 0.0;
      for (double x : fd.comp(c)) adv_mean += x;
      adv_mean /= static_cast<double>(g.size());
      CHECK(std::abs(hat[0].real() - adv_mean) <= 1e-6);
      CHECK(count_nonfinite(f) == 0);
    }
  }
}

TEST_SUITE("advance_velocity") {
  const Grid g = Grid::cube(16);

  TEST_CASE("single mode decay factor") {
    SpectralWorkspace ws(g);
    VectorField u(g);
    fill_comp(u, 0, [](const Point& x) { return std::sin(x[0]); });
    MomentumOptions o;
    o.theta = 1.0;
    const auto out = advance_velocity(ws, u, VectorField(g), 0.1, 1.0, PhysParams{}, o);
    CHECK(max_diff(out, (1.0 / 1.2) * u) <= 1e-15);
  }

  TEST_CASE("Crank-Nicolson factor on a transverse mode") {
    SpectralWorkspace ws(g);
    VectorField u(g);
    fill_comp(u, 1, [](const Point& x) { return std::sin(2 * x[0]); });
    MomentumOptions o;
    o.theta = 0.5;
    const double dt = 0.05, a = 4.0;
    const auto out = advance_velocity(ws, u, VectorField(g), dt, 1.0, PhysParams{}, o);
    const double factor = (1.0 / dt - 0.5 * a) / (1.0 / dt + 0.5 * a);
    CHECK(max_diff(out, factor * u) <= 1e-15);
  }

  TEST_CASE("constant velocity is untouched and the mean takes f dt / rho_bar") {
    SpectralWorkspace ws(g);
    const VectorField u(g, 0.3);
    const auto out = advance_velocity(ws, u, VectorField(g), 0.1, 1.0, PhysParams{}, {});
    CHECK(max_diff(out, u) <= 1e-15);
    const auto pushed = advance_velocity(ws, u, VectorField(g, 2.0), 0.1, 2.0, PhysParams{}, {});
    for (double x : pushed.data()) CHECK(x == doctest::Approx(0.4).epsilon(1e-14));
  }

  TEST_CASE("implicit step solves its linear system") {
    SpectralWorkspace ws(g);
    const auto u = random_field<3>(g, 31, 3, 0.1);
    const auto f = random_field<3>(g, 32, 3, 0.1);
    PhysParams p;
    p.lambda = 0.5;
    for (double theta : {0.5, 0.75, 1.0}) {
      MomentumOptions o;
      o.theta = theta;
      const double dt = 0.01, rb = 1.2;
      const auto v = advance_velocity(ws, u, f, dt, rb, p, o);
      // rho_bar/dt (v - u) + theta A v + (1 - theta) A u = f
      VectorField lhs = (rb / dt) * (v - u);
      lhs += theta * lame_apply(ws, v, p.mu, p.lambda);
      lhs += (1 - theta) * lame_apply(ws, u, p.mu, p.lambda);
      CHECK(max_diff(lhs, f) <= 1e-9);
    }
  }

  TEST_CASE("state overload uses the mean density") {
    SpectralWorkspace ws(g);
    FlowState s(g);
    s.rho.fill(1.5);
    s.u = random_field<3>(g, 3, 2, 0.1);
    const auto rhs = assemble_rhs(ws, s, PhysParams{});
    const auto a = advance_velocity(ws, s, rhs, 0.01, PhysParams{}, {});
    const auto b = advance_velocity(ws, s.u, rhs.f, 0.01, 1.5, PhysParams{}, {});
    CHECK(a == b);
  }

  TEST_CASE("parameter checks") {
    SpectralWorkspace ws(g);
    MomentumOptions o;
    o.theta = 0.4;
    CHECK(code_of([&] { o.validate(); }) == ErrorCode::InvalidParams);
    CHECK(code_of([&] { advance_velocity(ws, VectorField(g), VectorField(g), 0.1, 1.0, {}, o); }) ==
          ErrorCode::InvalidParams);
    CHECK(code_of([&] { advance_velocity(ws, VectorField(g), VectorField(g), 0.1, 0.0, {}, {}); }) ==
          ErrorCode::InvalidParams);
    CHECK(code_of([&] { advance_velocity(ws, VectorField(g), VectorField(g), -1.0, 1.0, {}, {}); }) ==
          ErrorCode::InvalidParams);
  }
}
