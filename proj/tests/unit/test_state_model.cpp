#include <doctest.h>

#include <cmath>

#include "cvf/diagnostics.hpp"
#include "cvf/errors.hpp"
#include "cvf/initial_condition.hpp"
#include "cvf/state.hpp"
#include "test_support.hpp"

using namespace cvf;
using namespace cvf::test;

namespace {

double det_I_plus(const TensorField& E, std::size_t p) {
  const double a = 1 + E(0, p), b = E(1, p), c = E(2, p);
  const double d = E(3, p), e = 1 + E(4, p), f = E(5, p);
  const double g = E(6, p), h = E(7, p), i = 1 + E(8, p);
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

template <typename Fn>
ErrorCode code_of(Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("params") {
  TEST_CASE("default parameters are valid") { PhysParams{}.validate(); }

  TEST_CASE("each constraint is enforced") {
    auto bad = [](auto mutate) {
      PhysParams p;
      mutate(p);
      return code_of([&] { p.validate(); });
    };
    CHECK(bad([](PhysParams& p) { p.mu = 0; }) == ErrorCode::InvalidParams);
    CHECK(bad([](PhysParams& p) { p.lambda = -1; }) == ErrorCode::InvalidParams);
    CHECK(bad([](PhysParams& p) { p.gamma = 1; }) == ErrorCode::InvalidParams);
    CHECK(bad([](PhysParams& p) { p.nu = 0.5; }) == ErrorCode::InvalidParams);
    CHECK(bad([](PhysParams& p) { p.mu = NAN; }) == ErrorCode::InvalidParams);
  }
}

TEST_SUITE("pressure") {
  const Grid g = Grid::cube(8);

  TEST_CASE("unit and constant densities") {
    const auto P1 = pressure(ScalarField(g, 1.0), 2.0);
    CHECK(max_abs(P1) == 1.0);
    const auto P = pressure(ScalarField(g, 1.1), 2.0);
    for (double x : P.data()) CHECK(x == doctest::Approx(1.21).epsilon(1e-15));
  }

  TEST_CASE("log P = gamma log rho") {
    const auto rho = random_field<1>(g, 3, 2, 0.4, 1.0);
    for (double gamma : {1.4, 2.0, 3.0}) {
      const auto P = pressure(rho, gamma);
      for (std::size_t p = 0; p < g.size(); ++p)
        CHECK(std::abs(std::log(P[p]) - gamma * std::log(rho[p])) <= 1e-12);
    }
  }

  TEST_CASE("non-positive density is rejected") {
    ScalarField rho(g, 1.0);
    rho[5] = 0.0;
    CHECK(code_of([&] { pressure(rho, 2.0); }) == ErrorCode::NonPositiveDensity);
  }

  TEST_CASE("pressure is monotone in rho") {
    const auto a = random_field<1>(g, 4, 2, 0.3, 1.0);
    auto b = a;
    const auto bump = random_field<1>(g, 5, 2, 0.1, 0.1);
    for (std::size_t p = 0; p < g.size(); ++p) b[p] += std::abs(bump[p]);
    for (double gamma : {1.2, 2.0, 4.0}) {
      const auto Pa = pressure(a, gamma), Pb = pressure(b, gamma);
      for (std::size_t p = 0; p < g.size(); ++p) CHECK(Pa[p] <= Pb[p]);
    }
  }
}

TEST_SUITE("pressure potential") {
  TEST_CASE("zero at equilibrium, quadratic at gamma 2") {
    CHECK(pressure_potential(1.0, 2.0) == 0.0);
    CHECK(pressure_potential(1.0, 1.4) == 0.0);
    for (double r : {0.3, 0.9, 1.0 + 1e-9, 1.7, 3.0})
      CHECK(pressure_potential(r, 2.0) == doctest::Approx((r - 1) * (r - 1)).epsilon(1e-12));
  }

  TEST_CASE("convexity bound at gamma 1.4, rho 1.2") {
    const double v = pressure_potential(1.2, 1.4);
    CHECK(v > 0.0);
    const double eta = convexity_eta(1.4);
    CHECK(eta > 0.0);
    CHECK(v * (1.4 - 1.0) >= eta * 0.04 * (1.0 - 1e-12));
  }

  TEST_CASE("Taylor branch matches the direct formula") {
    for (double gamma : {1.4, 2.5}) {
      for (double r : {1.0 + 1e-3, 1.0 - 2e-3, 1.05}) {
        const double direct = (std::pow(r, gamma) - gamma * r + gamma - 1) / (gamma - 1);
        CHECK(pressure_potential(r, gamma) == doctest::Approx(direct).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("nonnegative everywhere") {
    for (double gamma : {1.1, 1.4, 2.0, 5.0})
      for (double r = 0.01; r < 4.0; r += 0.013) CHECK(pressure_potential(r, gamma) >= 0.0);
  }

  TEST_CASE("convexity_eta is the sharp constant on its range") {
    for (double gamma : {1.2, 1.4, 1.8, 2.0, 3.0}) {
      const double eta = convexity_eta(gamma);
      const double hi = gamma < 2.0 ? 2.0 : 6.0;
      double inf = 1e300;
      for (double x = 1e-3; x < hi; x += 1e-3) {
        if (std::abs(x - 1.0) < 1e-6) continue;
        inf = std::min(inf, (std::pow(x, gamma) - 1 - gamma * (x - 1)) / ((x - 1) * (x - 1)));
      }
      CHECK(eta <= inf * (1 + 1e-9));
      CHECK(eta >= inf * (1 - 1e-2));
    }
  }
}

TEST_SUITE("flow state validation") {
  const Grid g = Grid::cube(8);

  TEST_CASE("equilibrium passes with unit density range") {
    const auto r = validate(FlowState::equilibrium(g));
    CHECK(r.ok());
    CHECK(r.rho_min == 1.0);
    CHECK(r.rho_max == 1.0);
  }

  TEST_CASE("one NaN sample is flagged") {
    FlowState s(g);
    s.u(1, 17) = NAN;
    const auto r = validate(s);
    CHECK_FALSE(r.ok());
    CHECK(r.nonfinite == 1);
  }

  TEST_CASE("non-positive density is flagged") {
    FlowState s(g);
    s.rho[0] = -1.0;
    CHECK_FALSE(validate(s).positive_density);
  }
}

TEST_SUITE("initial conditions") {
  const Grid g = Grid::cube(32);
  const PhysParams params;

  TEST_CASE("spec validation") {
    ICSpec s;
    s.validate();
    s.amplitude = 1e-2;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidParams);
    s.modes = {{0, 0, 0}};
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidParams);
    s.modes = {{1, 0, 0}};
    s.validate();
    s.amplitude = -1.0;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidParams);
  }

  TEST_CASE("zero amplitude gives the identity map") {
    SpectralWorkspace ws(Grid::cube(16));
    ICSpec s;
    s.velocity_amplitude = 0.1;
    s.seed = 4;
    const auto ic = generate_ic(s, ws.grid(), params, ws);
    for (double x : ic.state.rho.data()) CHECK(x == 1.0);
    CHECK(max_abs(ic.state.E) == 0.0);
    CHECK(max_abs(ic.state.u) > 0.0);
    CHECK(max_pointwise_norm(ic.state.u) <= 0.1 * (1 + 1e-12));
  }

  TEST_CASE("single mode at amplitude 1e-2 is compatible") {
    SpectralWorkspace ws(g);
    ICSpec s;
    s.amplitude = 1e-2;
    s.modes = {{1, 0, 0}};
    s.seed = 1;
    const auto ic = generate_ic(s, g, params, ws);
    CHECK(curl_compatibility_residual(ws, ic.state.E).linf <= 1e-8);
    CHECK(piola_residual(ws, ic.state.rho, ic.state.E) <= 1e-8);
    double err = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p)
      err = std::max(err, std::abs(ic.state.rho[p] * det_I_plus(ic.state.E, p) - 1.0));
    CHECK(err <= 1e-8);
    CHECK(ic.report.rho_det_error == doctest::Approx(err).epsilon(1e-6));
  }

  TEST_CASE("rho det F = 1 within 1e-8 at amplitude 1e-2") {
    SpectralWorkspace ws(g);
    for (std::uint64_t seed : {2u, 9u}) {
      ICSpec s;
      s.amplitude = 1e-2;
      s.modes = {{1, 0, 0}, {0, 3, 1}, {2, -1, 1}};
      s.seed = seed;
      const auto ic = generate_ic(s, g, params, ws);
      CHECK(ic.report.rho_det_error <= 1e-8);
      const auto v = validate(ic.state);
      CHECK(v.rho_min >= 0.5);
      CHECK(v.rho_max <= 1.5);
    }
  }

  TEST_CASE("curl residual is bounded by the interpolation error estimate") {
    // The estimate is the part of E that a 2N sampling carries beyond the
    // band kept at N.
    const Grid coarse = Grid::cube(16);
    const Grid fine = Grid::cube(32);
    SpectralWorkspace wc(coarse), wf(fine);
    ICSpec s;
    s.amplitude = 1e-2;
    s.modes = {{1, 0, 0}, {0, 2, 1}, {3, -1, 2}};
    s.seed = 3;
    // Building the fine state at a 2/3 band of 10 keeps modes up to 10;
    // the coarse band stops at 5.
    const auto icf = generate_ic(s, fine, params, wf);
    double tail = 0.0;
    SpectralBuffer hat(wf.modes());
    for (std::size_t c = 0; c < 9; ++c) {
      wf.forward(icf.state.E.comp(c), hat);
      double sum = 0.0;
      const int nxh = wf.nxh();
      for (std::size_t m = 0; m < wf.modes(); ++m) {
        const int ix = static_cast<int>(m % nxh);
        const int iy = static_cast<int>((m / nxh) % 32);
        const int iz = static_cast<int>(m / (nxh * 32));
        const int my = iy > 16 ? iy - 32 : iy, mz = iz > 16 ? iz - 32 : iz;
        if (3 * ix < 16 && 3 * std::abs(my) < 16 && 3 * std::abs(mz) < 16) continue;
        sum += (ix == 0 ? 1.0 : 2.0) * std::abs(hat[m]);
      }
      tail = std::max(tail, sum);
    }
    const auto icc = generate_ic(s, coarse, params, wc);
    CHECK(tail > 0.0);
    CHECK(icc.report.curl_linf <= 10.0 * tail);
  }

  TEST_CASE("steep large-amplitude map is not invertible") {
    SpectralWorkspace ws(g);
    ICSpec s;
    s.amplitude = 0.9;
    s.modes = {{4, 0, 0}};
    s.seed = 1;
    CHECK(code_of([&] { generate_ic(s, g, params, ws); }) == ErrorCode::MapNotInvertible);
  }

  TEST_CASE("generation is deterministic in the seed") {
    SpectralWorkspace ws(Grid::cube(16));
    ICSpec s;
    s.amplitude = 1e-2;
    s.modes = {{1, 0, 0}, {0, 1, 1}};
    s.seed = 12;
    s.velocity_amplitude = 1e-2;
    const auto a = generate_ic(s, ws.grid(), params, ws);
    const auto b = generate_ic(s, ws.grid(), params, ws);
    CHECK(a.state == b.state);
    s.seed = 13;
    const auto c = generate_ic(s, ws.grid(), params, ws);
    CHECK_FALSE(a.state == c.state);
  }
}
