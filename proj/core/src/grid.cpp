#include "cvf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvf/errors.hpp"

namespace cvf {

Grid::Grid(std::array<int, 3> n, std::array<double, 3> length) : n_(n), length_(length) {
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    if (n_[a] < 4 || n_[a] % 2 != 0) {
      throw Error(ErrorCode::InvalidGrid, std::string("resolution along ") + kAxis[a] +
                                              " must be even and >= 4, got " +
                                              std::to_string(n_[a]));
    }
    if (!std::isfinite(length_[a]) || length_[a] <= 0.0) {
      throw Error(ErrorCode::InvalidGrid,
                  std::string("box length along ") + kAxis[a] + " must be positive and finite");
    }
    spacing_[a] = length_[a] / n_[a];
    if (spacing_[a] * n_[a] != length_[a]) {
      throw Error(ErrorCode::InvalidGrid, std::string("spacing * N does not reproduce the box "
                                                      "length exactly along ") +
                                              kAxis[a]);
    }
  }
}

double Grid::min_spacing() const noexcept {
  return std::min({spacing_[0], spacing_[1], spacing_[2]});
}

Grid Grid::scaled(double factor) const {
  return Grid(n_, {length_[0] * factor, length_[1] * factor, length_[2] * factor});
}

}  // namespace cvf
