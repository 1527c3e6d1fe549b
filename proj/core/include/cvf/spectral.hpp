/// @file spectral.hpp
/// @brief FFTW-backed transform plans, wavenumber tables and the 2/3 dealias
/// mask for one Grid.
///
/// Coefficients are normalised so that the zero mode equals the field mean.
/// Derivative wavenumbers zero the Nyquist index on every axis, so odd
/// derivatives of a Nyquist-only mode vanish and the Lame symbol treats such
/// modes like the mean.
///
/// A workspace owns scratch buffers; do not share one between threads.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "cvf/field.hpp"
#include "cvf/grid.hpp"

namespace cvf {

using Complex = std::complex<double>;
using SpectralBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const Grid& grid);
  ~SpectralWorkspace();
  SpectralWorkspace(SpectralWorkspace&&) noexcept;
  SpectralWorkspace& operator=(SpectralWorkspace&&) noexcept;
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const Grid& grid() const noexcept { return grid_; }

  /// Number of complex coefficients: Nz * Ny * (Nx/2 + 1).
  std::size_t modes() const noexcept { return modes_; }
  int nxh() const noexcept { return grid_.nx() / 2 + 1; }

  SpectralBuffer make_buffer() const { return SpectralBuffer(modes_); }

  void forward(std::span<const double> in, SpectralBuffer& out);
  SpectralBuffer forward(std::span<const double> in) {
    SpectralBuffer out(modes_);
    forward(in, out);
    return out;
  }
  /// `in` is left untouched.
  void inverse(const SpectralBuffer& in, std::span<double> out);

  /// Derivative wavenumbers (Nyquist zeroed) for axis 0 (length Nx/2+1),
  /// axis 1 (length Ny) and axis 2 (length Nz).
  const std::vector<double>& wavenumbers(int axis) const noexcept { return k_[axis]; }

  /// Wavevector of spectral index m (derivative convention).
  std::array<double, 3> wavevector(std::size_t m) const noexcept {
    const std::size_t nxh_ = static_cast<std::size_t>(nxh());
    const std::size_t ix = m % nxh_;
    const std::size_t rest = m / nxh_;
    const std::size_t iy = rest % static_cast<std::size_t>(grid_.ny());
    const std::size_t iz = rest / static_cast<std::size_t>(grid_.ny());
    return {k_[0][ix], k_[1][iy], k_[2][iz]};
  }

  /// true where the 2/3 rule keeps the mode; always true at the zero mode.
  const std::vector<unsigned char>& dealias_mask() const noexcept { return mask_; }
  void apply_dealias(SpectralBuffer& buf) const;

  /// Mean of |f|^2 over the box for the real field with coefficients `buf`.
  double mean_square(const SpectralBuffer& buf) const noexcept;

  /// out = i k_axis * in
  void differentiate(const SpectralBuffer& in, int axis, SpectralBuffer& out) const;

 private:
  Grid grid_;
  std::size_t modes_;
  std::array<std::vector<double>, 3> k_;
  std::vector<unsigned char> mask_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace cvf
