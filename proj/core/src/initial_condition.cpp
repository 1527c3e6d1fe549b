#include "cvf/initial_condition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "cvf/diagnostics.hpp"
#include "cvf/errors.hpp"
#include "cvf/operators.hpp"

namespace cvf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInversionTol = 1e-13;
constexpr int kInversionMaxIter = 100;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::array<double, 3> random_unit(std::mt19937_64& rng) {
  const double z = 2.0 * uniform01(rng) - 1.0;
  const double phi = kTwoPi * uniform01(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

struct SineMode {
  std::array<double, 3> kappa;  // physical wavevector
  std::array<double, 3> coeff;
  double phase;
};

std::array<double, 3> physical_wavevector(const std::array<int, 3>& m, const Grid& g) {
  return {kTwoPi * m[0] / g.length()[0], kTwoPi * m[1] / g.length()[1],
          kTwoPi * m[2] / g.length()[2]};
}

// phi(X) = sum_m c_m sin(kappa_m . X + phase_m)
class Displacement {
 public:
  explicit Displacement(std::vector<SineMode> modes) : modes_(std::move(modes)) {}

  std::array<double, 3> value(const std::array<double, 3>& X) const {
    std::array<double, 3> v{};
    for (const auto& m : modes_) {
      const double s = std::sin(dot(m.kappa, X) + m.phase);
      for (int i = 0; i < 3; ++i) v[i] += m.coeff[i] * s;
    }
    return v;
  }

  /// Row-major grad phi, (i,j) = d phi_i / d X_j.
  std::array<double, 9> gradient(const std::array<double, 3>& X) const {
    std::array<double, 9> g{};
    for (const auto& m : modes_) {
      const double c = std::cos(dot(m.kappa, X) + m.phase);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) g[3 * i + j] += m.coeff[i] * m.kappa[j] * c;
      }
    }
    return g;
  }

  /// Upper bound on the Lipschitz constant of phi.
  double lipschitz() const {
    double l = 0.0;
    for (const auto& m : modes_) l += norm(m.coeff) * norm(m.kappa);
    return l;
  }

 private:
  static double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  }
  static double norm(const std::array<double, 3>& a) { return std::sqrt(dot(a, a)); }

  std::vector<SineMode> modes_;
};

double det3(const std::array<double, 9>& a) {
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

std::array<double, 9> identity_plus(const std::array<double, 9>& g) {
  std::array<double, 9> f = g;
  f[0] += 1.0;
  f[4] += 1.0;
  f[8] += 1.0;
  return f;
}

Displacement build_displacement(const ICSpec& spec, const Grid& grid) {
  std::mt19937_64 rng(spec.seed);
  std::vector<SineMode> modes;
  const double w = spec.amplitude / static_cast<double>(spec.modes.size());
  for (const auto& m : spec.modes) {
    const auto d = random_unit(rng);
    const double phase = kTwoPi * uniform01(rng);
    modes.push_back({physical_wavevector(m, grid), {w * d[0], w * d[1], w * d[2]}, phase});
  }
  return Displacement(std::move(modes));
}

// Band-limited velocity over the 13 half-space directions with entries in
// {-1, 0, 1}; the coefficient norms sum to the requested amplitude, so it also
// bounds max |u0|. Independent of the grid resolution.
std::vector<SineMode> build_velocity_modes(const ICSpec& spec, const Grid& grid) {
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<SineMode> modes;
  double total = 0.0;
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      for (int c = -1; c <= 1; ++c) {
        const std::array<int, 3> m = {a, b, c};
        // keep one of each +-m pair
        const bool positive = a > 0 || (a == 0 && (b > 0 || (b == 0 && c > 0)));
        if (!positive) continue;
        std::array<double, 3> coeff;
        for (auto& x : coeff) x = 2.0 * uniform01(rng) - 1.0;
        const double phase = kTwoPi * uniform01(rng);
        total += std::sqrt(coeff[0] * coeff[0] + coeff[1] * coeff[1] + coeff[2] * coeff[2]);
        modes.push_back({physical_wavevector(m, grid), coeff, phase});
      }
    }
  }
  const double scale = total > 0.0 ? spec.velocity_amplitude / total : 0.0;
  for (auto& m : modes) {
    for (auto& x : m.coeff) x *= scale;
  }
  return modes;
}

}  // namespace

void ICSpec::validate() const {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw Error(ErrorCode::InvalidParams, "ic amplitude must be finite and >= 0");
  }
  if (!std::isfinite(velocity_amplitude) || velocity_amplitude < 0.0) {
    throw Error(ErrorCode::InvalidParams, "ic velocity_amplitude must be finite and >= 0");
  }
  if (amplitude > 0.0 && modes.empty()) {
    throw Error(ErrorCode::InvalidParams, "ic modes must be nonempty when amplitude > 0");
  }
  for (const auto& m : modes) {
    if (m[0] == 0 && m[1] == 0 && m[2] == 0) {
      throw Error(ErrorCode::InvalidParams, "ic modes must not contain the zero wavevector");
    }
  }
}

IcResult generate_ic(const ICSpec& spec, const Grid& grid, const PhysParams& params,
                     SpectralWorkspace& ws) {
  spec.validate();
  params.validate();
  if (!(ws.grid() == grid)) {
    throw Error(ErrorCode::InvalidGrid, "generate_ic: workspace grid mismatch");
  }

  IcResult out{FlowState(grid), IcReport{}};
  IcReport& rep = out.report;
  FlowState& st = out.state;
  const auto& h = grid.spacing();

  if (spec.amplitude > 0.0) {
    const Displacement phi = build_displacement(spec, grid);

    // Orientation check on a 2x refined Lagrangian grid.
    double det_min = std::numeric_limits<double>::infinity();
    for (int iz = 0; iz < 2 * grid.nz(); ++iz) {
      for (int iy = 0; iy < 2 * grid.ny(); ++iy) {
        for (int ix = 0; ix < 2 * grid.nx(); ++ix) {
          const std::array<double, 3> X = {0.5 * ix * h[0], 0.5 * iy * h[1], 0.5 * iz * h[2]};
          det_min = std::min(det_min, det3(identity_plus(phi.gradient(X))));
        }
      }
    }
    rep.det_min = det_min;
    if (!(det_min > 0.0)) {
      throw Error(ErrorCode::MapNotInvertible,
                  "det(I + grad phi) reaches " + std::to_string(det_min));
    }

    // Invert x = X + phi(X) pointwise: X <- X + omega (x - phi(X) - X).
    const double omega = phi.lipschitz() < 0.5 ? 1.0 : 0.5;
    int max_iters = 0;
    for (int iz = 0; iz < grid.nz(); ++iz) {
      for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
          const std::array<double, 3> x = {ix * h[0], iy * h[1], iz * h[2]};
          std::array<double, 3> X = x;
          int it = 0;
          for (;; ++it) {
            if (it >= kInversionMaxIter) {
              throw Error(ErrorCode::MapNotInvertible,
                          "map inversion did not converge in 100 iterations");
            }
            const auto p = phi.value(X);
            double inc = 0.0;
            for (int a = 0; a < 3; ++a) {
              const double d = omega * (x[a] - p[a] - X[a]);
              X[a] += d;
              inc = std::max(inc, std::abs(d));
            }
            if (!std::isfinite(inc)) {
              throw Error(ErrorCode::MapNotInvertible, "map inversion diverged");
            }
            if (inc < kInversionTol) break;
          }
          max_iters = std::max(max_iters, it + 1);
          const std::size_t p = grid.index(ix, iy, iz);
          const auto g = phi.gradient(X);
          for (int c = 0; c < 9; ++c) st.E(static_cast<std::size_t>(c), p) = g[c];
          st.rho[p] = 1.0 / det3(identity_plus(g));
        }
      }
    }
    rep.inversion_iterations = max_iters;

    // Project onto the resolved band so the state lies in the solver's space.
    dealias(ws, st.rho);
    dealias(ws, st.E);

    for (std::size_t p = 0; p < grid.size(); ++p) {
      std::array<double, 9> f;
      for (int c = 0; c < 9; ++c) f[c] = st.E(static_cast<std::size_t>(c), p);
      rep.rho_det_error =
          std::max(rep.rho_det_error, std::abs(st.rho[p] * det3(identity_plus(f)) - 1.0));
    }
  }

  if (spec.velocity_amplitude > 0.0) {
    const auto vmodes = build_velocity_modes(spec, grid);
    for (int iz = 0; iz < grid.nz(); ++iz) {
      for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
          const std::array<double, 3> x = {ix * h[0], iy * h[1], iz * h[2]};
          const std::size_t p = grid.index(ix, iy, iz);
          for (const auto& m : vmodes) {
            const double s =
                std::sin(m.kappa[0] * x[0] + m.kappa[1] * x[1] + m.kappa[2] * x[2] + m.phase);
            for (int i = 0; i < 3; ++i) st.u(static_cast<std::size_t>(i), p) += m.coeff[i] * s;
          }
        }
      }
    }
  }

  const ResidualNorms curl = curl_compatibility_residual(ws, st.E);
  rep.curl_linf = curl.linf;
  rep.curl_l2 = curl.l2;
  rep.piola_l2 = piola_residual(ws, st.rho, st.E);
  return out;
}

}  // namespace cvf
