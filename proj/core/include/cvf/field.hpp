/// @file field.hpp
/// @brief Real-space scalar, vector and tensor fields on a periodic Grid.
///
/// Storage is component-major: component c occupies samples
/// [c*grid.size(), (c+1)*grid.size()). Tensor components are row-major,
/// component (i,j) lives at c = 3*i + j. This header carries no derivative
/// machinery; see operators.hpp for that.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <new>
#include <span>
#include <vector>

#include "cvf/grid.hpp"

namespace cvf {

/// 64-byte aligned allocator so every component buffer satisfies the
/// alignment FFTW planned with.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using AlignedVector = std::vector<double, AlignedAllocator<double>>;

template <std::size_t NComp>
class Field {
 public:
  static constexpr std::size_t kComponents = NComp;

  explicit Field(const Grid& grid, double value = 0.0)
      : grid_(grid), data_(NComp * grid.size(), value) {}

  const Grid& grid() const noexcept { return grid_; }
  std::size_t points() const noexcept { return grid_.size(); }
  static constexpr std::size_t components() noexcept { return NComp; }

  std::span<double> comp(std::size_t c) noexcept {
    return {data_.data() + c * points(), points()};
  }
  std::span<const double> comp(std::size_t c) const noexcept {
    return {data_.data() + c * points(), points()};
  }
  std::span<double> comp(std::size_t i, std::size_t j) noexcept
    requires(NComp == 9)
  {
    return comp(3 * i + j);
  }
  std::span<const double> comp(std::size_t i, std::size_t j) const noexcept
    requires(NComp == 9)
  {
    return comp(3 * i + j);
  }

  double& operator()(std::size_t c, std::size_t p) noexcept { return data_[c * points() + p]; }
  double operator()(std::size_t c, std::size_t p) const noexcept {
    return data_[c * points() + p];
  }
  double& operator[](std::size_t p) noexcept
    requires(NComp == 1)
  {
    return data_[p];
  }
  double operator[](std::size_t p) const noexcept
    requires(NComp == 1)
  {
    return data_[p];
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  Field& operator+=(const Field& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Field& operator*=(double a) {
    for (auto& x : data_) x *= a;
    return *this;
  }
  /// this += a * o
  Field& axpy(double a, const Field& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

  friend bool operator==(const Field& a, const Field& b) {
    return a.grid_ == b.grid_ && a.data_ == b.data_;
  }

 private:
  Grid grid_;
  AlignedVector data_;
};

using ScalarField = Field<1>;
using VectorField = Field<3>;
using TensorField = Field<9>;

template <std::size_t N>
double max_abs(const Field<N>& f) {
  double m = 0.0;
  for (double x : f.data()) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t N>
std::size_t count_nonfinite(const Field<N>& f) {
  return static_cast<std::size_t>(
      std::count_if(f.data().begin(), f.data().end(), [](double x) { return !std::isfinite(x); }));
}

/// Max over grid points of the Euclidean norm across components.
template <std::size_t N>
double max_pointwise_norm(const Field<N>& f) {
  double m = 0.0;
  for (std::size_t p = 0; p < f.points(); ++p) {
    double s = 0.0;
    for (std::size_t c = 0; c < N; ++c) s += f(c, p) * f(c, p);
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

/// Trapezoidal (uniform-grid) quadrature of the sample values.
inline double integrate(std::span<const double> samples, const Grid& grid) {
  double s = 0.0;
  for (double x : samples) s += x;
  return s * grid.cell_volume();
}

inline double mean(const ScalarField& f) {
  return integrate(f.data(), f.grid()) / f.grid().volume();
}

/// Continuous L2 norm sqrt(int |f|^2 dx), summed over components.
template <std::size_t N>
double l2_norm(const Field<N>& f) {
  double s = 0.0;
  for (double x : f.data()) s += x * x;
  return std::sqrt(s * f.grid().cell_volume());
}

}  // namespace cvf
