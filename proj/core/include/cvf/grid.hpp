/// @file grid.hpp
/// @brief Uniform periodic grid on the box [0,Lx) x [0,Ly) x [0,Lz).
#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace cvf {

class Grid {
 public:
  /// Throws InvalidGrid unless every N is even and >= 4, every L is positive and
  /// finite, and (L/N)*N reproduces L exactly.
  Grid(std::array<int, 3> n, std::array<double, 3> length);

  static Grid cube(int n, double length = 2.0 * std::numbers::pi) {
    return Grid({n, n, n}, {length, length, length});
  }

  const std::array<int, 3>& n() const noexcept { return n_; }
  const std::array<double, 3>& length() const noexcept { return length_; }
  const std::array<double, 3>& spacing() const noexcept { return spacing_; }

  int nx() const noexcept { return n_[0]; }
  int ny() const noexcept { return n_[1]; }
  int nz() const noexcept { return n_[2]; }

  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_[0]) * static_cast<std::size_t>(n_[1]) *
           static_cast<std::size_t>(n_[2]);
  }

  double volume() const noexcept { return length_[0] * length_[1] * length_[2]; }
  double cell_volume() const noexcept { return spacing_[0] * spacing_[1] * spacing_[2]; }
  double min_spacing() const noexcept;

  /// Flat index with ix fastest: (iz*Ny + iy)*Nx + ix.
  std::size_t index(int ix, int iy, int iz) const noexcept {
    return (static_cast<std::size_t>(iz) * static_cast<std::size_t>(n_[1]) +
            static_cast<std::size_t>(iy)) *
               static_cast<std::size_t>(n_[0]) +
           static_cast<std::size_t>(ix);
  }

  double coord(int axis, int i) const noexcept { return i * spacing_[axis]; }

  /// Same resolution, box scaled by `factor` on every axis.
  Grid scaled(double factor) const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  std::array<int, 3> n_;
  std::array<double, 3> length_;
  std::array<double, 3> spacing_;
};

}  // namespace cvf
