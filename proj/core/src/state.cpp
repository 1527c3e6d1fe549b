#include "cvf/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cvf/errors.hpp"

namespace cvf {

void PhysParams::validate() const {
  if (!std::isfinite(mu) || !(mu > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "mu must be positive");
  }
  if (!std::isfinite(lambda) || !(2.0 * mu + 3.0 * lambda > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "lambda must satisfy 2*mu + 3*lambda > 0");
  }
  if (!std::isfinite(gamma) || !(gamma > 1.0)) {
    throw Error(ErrorCode::InvalidParams, "gamma must be > 1");
  }
  if (!std::isfinite(nu) || !(nu >= 1.0)) {
    throw Error(ErrorCode::InvalidParams, "nu must be >= 1");
  }
}

void require_positive_density(const ScalarField& rho, const char* where) {
  for (double r : rho.data()) {
    if (!(r > 0.0)) {
      throw Error(ErrorCode::NonPositiveDensity,
                  std::string(where) + ": density sample " + std::to_string(r) + " is not positive");
    }
  }
}

ScalarField pressure(const ScalarField& rho, double gamma) {
  require_positive_density(rho, "pressure");
  ScalarField p(rho.grid());
  for (std::size_t i = 0; i < p.points(); ++i) p[i] = std::pow(rho[i], gamma);
  return p;
}

double pressure_potential(double rho, double gamma) {
  if (!(rho > 0.0)) {
    throw Error(ErrorCode::NonPositiveDensity, "pressure_potential: density must be positive");
  }
  const double d = rho - 1.0;
  if (d == 0.0) return 0.0;
  if (std::abs(d) < 1e-2) {
    // Binomial series: (1+d)^g - 1 - g d = sum_{n>=2} C(g,n) d^n.
    double term = gamma * (gamma - 1.0) / 2.0 * d * d;
    double sum = term;
    for (int n = 3; n <= 16; ++n) {
      term *= (gamma - (n - 1)) / n * d;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return std::max(0.0, sum / (gamma - 1.0));
  }
  const double v = std::expm1(gamma * std::log1p(d)) - gamma * d;
  return std::max(0.0, v / (gamma - 1.0));
}

ScalarField pressure_potential(const ScalarField& rho, double gamma) {
  require_positive_density(rho, "pressure_potential");
  ScalarField out(rho.grid());
  for (std::size_t i = 0; i < out.points(); ++i) out[i] = pressure_potential(rho[i], gamma);
  return out;
}

double convexity_eta(double gamma) {
  if (!(gamma > 1.0)) throw Error(ErrorCode::InvalidParams, "convexity_eta: gamma must be > 1");
  // g(x) = (x^gamma - 1 - gamma (x-1)) / (x-1)^2 is monotone in x; its
  // infimum sits at the end of the admissible range.
  if (gamma >= 2.0) return gamma - 1.0;
  return std::pow(2.0, gamma) - 1.0 - gamma;
}

ValidationReport validate(const FlowState& state) {
  ValidationReport r;
  r.rho_min = std::numeric_limits<double>::infinity();
  r.rho_max = -std::numeric_limits<double>::infinity();
  for (double x : state.rho.data()) {
    if (!std::isfinite(x)) continue;
    r.rho_min = std::min(r.rho_min, x);
    r.rho_max = std::max(r.rho_max, x);
  }
  r.nonfinite = count_nonfinite(state.rho) + count_nonfinite(state.u) + count_nonfinite(state.E);
  r.grid_consistent = state.u.grid() == state.rho.grid() && state.E.grid() == state.rho.grid();
  r.positive_density = std::all_of(state.rho.data().begin(), state.rho.data().end(),
                                   [](double x) { return x > 0.0; });
  if (r.nonfinite > 0) {
    r.failures.push_back(std::to_string(r.nonfinite) + " non-finite samples");
  }
  if (!r.grid_consistent) r.failures.push_back("fields live on different grids");
  if (!r.positive_density) r.failures.push_back("density is not strictly positive");
  if (!std::isfinite(state.t)) r.failures.push_back("time stamp is not finite");
  return r;
}

}  // namespace cvf
