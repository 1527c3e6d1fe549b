/// @file operators.hpp
/// @brief Spectral differential operators and the Lame operator pair.
///
/// Index convention throughout: (grad u)_ij = d u_i / d x_j, and the
/// divergence of a tensor acts on rows, (div T)_i = d_j T_ij.
#pragma once

#include "cvf/field.hpp"
#include "cvf/spectral.hpp"

namespace cvf {

VectorField gradient(SpectralWorkspace& ws, const ScalarField& f);
TensorField jacobian(SpectralWorkspace& ws, const VectorField& v);
ScalarField divergence(SpectralWorkspace& ws, const VectorField& v);
VectorField divergence(SpectralWorkspace& ws, const TensorField& t);
ScalarField laplacian(SpectralWorkspace& ws, const ScalarField& f);
VectorField curl(SpectralWorkspace& ws, const VectorField& v);

/// Row i of the result is curl of row i of `t`.
TensorField curl_rows(SpectralWorkspace& ws, const TensorField& t);

/// Throws InvalidParams unless mu > 0 and 2 mu + 3 lambda > 0.
void check_lame_params(double mu, double lambda);

/// -mu Lap w - (mu + lambda) grad div w.
VectorField lame_apply(SpectralWorkspace& ws, const VectorField& w, double mu, double lambda);

/// Inverse of lame_apply on mean-free fields. Each mode with k != 0 solves
/// (mu |k|^2 I + (mu + lambda) k k^T) x = w; the k = 0 output is zero.
VectorField lame_solve(SpectralWorkspace& ws, const VectorField& w, double mu, double lambda);

/// Projects every component onto the modes kept by the 2/3 rule.
template <std::size_t N>
void dealias(SpectralWorkspace& ws, Field<N>& f) {
  SpectralBuffer buf(ws.modes());
  for (std::size_t c = 0; c < N; ++c) {
    ws.forward(f.comp(c), buf);
    ws.apply_dealias(buf);
    ws.inverse(buf, f.comp(c));
  }
}

/// Pointwise product a*b followed by dealiasing.
ScalarField dealiased_product(SpectralWorkspace& ws, const ScalarField& a, const ScalarField& b);

}  // namespace cvf
