#include "cvf/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace cvf {

struct SpectralWorkspace::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  AlignedVector real_scratch;
  SpectralBuffer complex_scratch;

  ~Plans() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

namespace {

// Signed integer mode number for index i on an axis of length n.
int signed_mode(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace

SpectralWorkspace::SpectralWorkspace(const Grid& grid)
    : grid_(grid),
      modes_(static_cast<std::size_t>(grid.nz()) * static_cast<std::size_t>(grid.ny()) *
             static_cast<std::size_t>(grid.nx() / 2 + 1)),
      plans_(std::make_unique<Plans>()) {
  const std::array<int, 3> len = {nxh(), grid.ny(), grid.nz()};
  for (int a = 0; a < 3; ++a) {
    const int n = grid.n()[a];
    const double k0 = 2.0 * std::numbers::pi / grid.length()[a];
    k_[a].resize(static_cast<std::size_t>(len[a]));
    for (int i = 0; i < len[a]; ++i) {
      const int m = signed_mode(i, n);
      k_[a][static_cast<std::size_t>(i)] = (i == n / 2) ? 0.0 : k0 * m;
    }
  }

  mask_.resize(modes_);
  auto keep = [](int i, int n) {
    const int m = signed_mode(i, n);
    return 3 * std::abs(m) < n;
  };
  std::size_t idx = 0;
  for (int iz = 0; iz < grid.nz(); ++iz) {
    for (int iy = 0; iy < grid.ny(); ++iy) {
      for (int ix = 0; ix < nxh(); ++ix, ++idx) {
        mask_[idx] = keep(ix, grid.nx()) && keep(iy, grid.ny()) && keep(iz, grid.nz());
      }
    }
  }
  mask_[0] = 1;

  plans_->real_scratch.assign(grid.size(), 0.0);
  plans_->complex_scratch.assign(modes_, Complex{});
  // FFTW_ESTIMATE keeps plan selection (and hence round-off) deterministic
  // across processes.
  auto* creal = plans_->real_scratch.data();
  auto* ccplx = reinterpret_cast<fftw_complex*>(plans_->complex_scratch.data());
  plans_->r2c = fftw_plan_dft_r2c_3d(grid.nz(), grid.ny(), grid.nx(), creal, ccplx, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_3d(grid.nz(), grid.ny(), grid.nx(), ccplx, creal, FFTW_ESTIMATE);
}

SpectralWorkspace::~SpectralWorkspace() = default;
SpectralWorkspace::SpectralWorkspace(SpectralWorkspace&&) noexcept = default;
SpectralWorkspace& SpectralWorkspace::operator=(SpectralWorkspace&&) noexcept = default;

void SpectralWorkspace::forward(std::span<const double> in, SpectralBuffer& out) {
  out.resize(modes_);
  if (in.size() != grid_.size() ||
      fftw_alignment_of(const_cast<double*>(in.data())) !=
          fftw_alignment_of(plans_->real_scratch.data())) {
    throw std::logic_error("SpectralWorkspace::forward: input size or alignment mismatch");
  }
  // r2c with FFTW_ESTIMATE does not overwrite its input, but the new-array
  // interface takes a non-const pointer.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (auto& c : out) c *= scale;
}

void SpectralWorkspace::inverse(const SpectralBuffer& in, std::span<double> out) {
  if (out.size() != grid_.size() ||
      fftw_alignment_of(out.data()) != fftw_alignment_of(plans_->real_scratch.data())) {
    throw std::logic_error("SpectralWorkspace::inverse: output size or alignment mismatch");
  }
  auto& scratch = plans_->complex_scratch;
  std::copy(in.begin(), in.end(), scratch.begin());
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

void SpectralWorkspace::apply_dealias(SpectralBuffer& buf) const {
  for (std::size_t m = 0; m < modes_; ++m) {
    if (!mask_[m]) buf[m] = Complex{};
  }
}

double SpectralWorkspace::mean_square(const SpectralBuffer& buf) const noexcept {
  const std::size_t nxh_ = static_cast<std::size_t>(nxh());
  const std::size_t last = static_cast<std::size_t>(grid_.nx() / 2);
  double s = 0.0;
  for (std::size_t m = 0; m < modes_; ++m) {
    const std::size_t ix = m % nxh_;
    const double w = (ix == 0 || ix == last) ? 1.0 : 2.0;
    s += w * std::norm(buf[m]);
  }
  return s;
}

void SpectralWorkspace::differentiate(const SpectralBuffer& in, int axis,
                                      SpectralBuffer& out) const {
  out.resize(modes_);
  const std::size_t nxh_ = static_cast<std::size_t>(nxh());
  const std::size_t ny = static_cast<std::size_t>(grid_.ny());
  const std::size_t nz = static_cast<std::size_t>(grid_.nz());
  std::size_t idx = 0;
  for (std::size_t iz = 0; iz < nz; ++iz) {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      for (std::size_t ix = 0; ix < nxh_; ++ix, ++idx) {
        const double k = axis == 0 ? k_[0][ix] : (axis == 1 ? k_[1][iy] : k_[2][iz]);
        const Complex v = in[idx];
        out[idx] = Complex(-k * v.imag(), k * v.real());
      }
    }
  }
}

}  // namespace cvf
