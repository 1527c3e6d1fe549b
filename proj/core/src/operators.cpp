#include "cvf/operators.hpp"

#include <cmath>
#include <string>

#include "cvf/errors.hpp"

namespace cvf {

namespace {

// Applies a per-mode 3x3 symbol to the spectral coefficients of w.
template <typename Symbol>
VectorField apply_vector_symbol(SpectralWorkspace& ws, const VectorField& w, Symbol&& symbol) {
  std::array<SpectralBuffer, 3> hat;
  for (int c = 0; c < 3; ++c) hat[c] = ws.forward(w.comp(c));
  for (std::size_t m = 0; m < ws.modes(); ++m) {
    const auto k = ws.wavevector(m);
    std::array<Complex, 3> in = {hat[0][m], hat[1][m], hat[2][m]};
    std::array<Complex, 3> out = symbol(k, in);
    for (int c = 0; c < 3; ++c) hat[c][m] = out[c];
  }
  VectorField result(w.grid());
  for (int c = 0; c < 3; ++c) ws.inverse(hat[c], result.comp(c));
  return result;
}

}  // namespace

VectorField gradient(SpectralWorkspace& ws, const ScalarField& f) {
  VectorField g(f.grid());
  const SpectralBuffer hat = ws.forward(f.comp(0));
  SpectralBuffer d(ws.modes());
  for (int a = 0; a < 3; ++a) {
    ws.differentiate(hat, a, d);
    ws.inverse(d, g.comp(a));
  }
  return g;
}

TensorField jacobian(SpectralWorkspace& ws, const VectorField& v) {
  TensorField j(v.grid());
  SpectralBuffer hat(ws.modes()), d(ws.modes());
  for (int i = 0; i < 3; ++i) {
    ws.forward(v.comp(i), hat);
    for (int a = 0; a < 3; ++a) {
      ws.differentiate(hat, a, d);
      ws.inverse(d, j.comp(i, a));
    }
  }
  return j;
}

ScalarField divergence(SpectralWorkspace& ws, const VectorField& v) {
  SpectralBuffer acc(ws.modes()), hat(ws.modes()), d(ws.modes());
  for (int a = 0; a < 3; ++a) {
    ws.forward(v.comp(a), hat);
    ws.differentiate(hat, a, d);
    for (std::size_t m = 0; m < ws.modes(); ++m) acc[m] += d[m];
  }
  ScalarField out(v.grid());
  ws.inverse(acc, out.comp(0));
  return out;
}

VectorField divergence(SpectralWorkspace& ws, const TensorField& t) {
  VectorField out(t.grid());
  SpectralBuffer acc(ws.modes()), hat(ws.modes()), d(ws.modes());
  for (int i = 0; i < 3; ++i) {
    std::fill(acc.begin(), acc.end(), Complex{});
    for (int j = 0; j < 3; ++j) {
      ws.forward(t.comp(i, j), hat);
      ws.differentiate(hat, j, d);
      for (std::size_t m = 0; m < ws.modes(); ++m) acc[m] += d[m];
    }
    ws.inverse(acc, out.comp(i));
  }
  return out;
}

ScalarField laplacian(SpectralWorkspace& ws, const ScalarField& f) {
  SpectralBuffer hat = ws.forward(f.comp(0));
  for (std::size_t m = 0; m < ws.modes(); ++m) {
    const auto k = ws.wavevector(m);
    hat[m] *= -(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
  }
  ScalarField out(f.grid());
  ws.inverse(hat, out.comp(0));
  return out;
}

VectorField curl(SpectralWorkspace& ws, const VectorField& v) {
  const Complex I(0.0, 1.0);
  return apply_vector_symbol(ws, v, [&](const std::array<double, 3>& k,
                                        const std::array<Complex, 3>& a) {
    return std::array<Complex, 3>{I * (k[1] * a[2] - k[2] * a[1]), I * (k[2] * a[0] - k[0] * a[2]),
                                  I * (k[0] * a[1] - k[1] * a[0])};
  });
}

TensorField curl_rows(SpectralWorkspace& ws, const TensorField& t) {
  TensorField out(t.grid());
  VectorField row(t.grid());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::copy(t.comp(i, j).begin(), t.comp(i, j).end(), row.comp(j).begin());
    }
    const VectorField c = curl(ws, row);
    for (int j = 0; j < 3; ++j) {
      std::copy(c.comp(j).begin(), c.comp(j).end(), out.comp(i, j).begin());
    }
  }
  return out;
}

void check_lame_params(double mu, double lambda) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::InvalidParams, "mu must be positive, got " + std::to_string(mu));
  }
  if (!(2.0 * mu + 3.0 * lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidParams,
                "ellipticity requires 2*mu + 3*lambda > 0, got lambda = " + std::to_string(lambda));
  }
}

VectorField lame_apply(SpectralWorkspace& ws, const VectorField& w, double mu, double lambda) {
  check_lame_params(mu, lambda);
  const double ml = mu + lambda;
  return apply_vector_symbol(ws, w, [&](const std::array<double, 3>& k,
                                        const std::array<Complex, 3>& a) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const Complex kdota = k[0] * a[0] + k[1] * a[1] + k[2] * a[2];
    std::array<Complex, 3> r;
    for (int c = 0; c < 3; ++c) r[c] = mu * k2 * a[c] + ml * k[c] * kdota;
    return r;
  });
}

VectorField lame_solve(SpectralWorkspace& ws, const VectorField& w, double mu, double lambda) {
  check_lame_params(mu, lambda);
  const double ml = mu + lambda;
  return apply_vector_symbol(ws, w, [&](const std::array<double, 3>& k,
                                        const std::array<Complex, 3>& a) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    std::array<Complex, 3> r{};
    if (k2 == 0.0) return r;
    // (mu k2 I + ml k k^T)^{-1} = (I - ml k k^T / (mu k2 + ml k2)) / (mu k2)
    const Complex kdota = k[0] * a[0] + k[1] * a[1] + k[2] * a[2];
    const double alpha = mu * k2;
    const double beta = ml / (alpha + ml * k2);
    for (int c = 0; c < 3; ++c) r[c] = (a[c] - beta * k[c] * kdota) / alpha;
    return r;
  });
}

ScalarField dealiased_product(SpectralWorkspace& ws, const ScalarField& a, const ScalarField& b) {
  ScalarField p(a.grid());
  for (std::size_t i = 0; i < p.points(); ++i) p[i] = a[i] * b[i];
  dealias(ws, p);
  return p;
}

}  // namespace cvf
