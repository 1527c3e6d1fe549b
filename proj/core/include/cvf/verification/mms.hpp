/// @file mms.hpp
/// @brief Convergence studies of the main solver against a manufactured
/// solution.
#pragma once

#include <string>
#include <vector>

#include "cvf/picard.hpp"
#include "cvf/verification/manufactured.hpp"

namespace cvf {

struct MmsRow {
  int n = 0;
  double dt = 0.0;
  double err_rho = 0.0;  ///< max |rho - rho*| at the end of the window
  double err_u = 0.0;
  double err_E = 0.0;
  double order_space = std::numeric_limits<double>::quiet_NaN();  ///< vs previous N at this dt
  double order_time = std::numeric_limits<double>::quiet_NaN();   ///< vs previous dt at this N

  double err_max() const noexcept { return std::max({err_rho, err_u, err_E}); }
};

struct MmsTable {
  std::vector<MmsRow> rows;  ///< ordered by N, then dt as given

  const MmsRow& at(int n, double dt) const;
  std::string to_csv() const;
};

/// Runs every (N, dt) pair from sol.t_begin to sol.t_end with the exact
/// forcing added to each equation; orders are log-log slopes of err_max.
MmsTable mms_run(const ManufacturedSolution& sol, const std::vector<int>& resolutions,
                 const std::vector<double>& dts, const PhysParams& params,
                 const StepOptions& opts = {});

/// Observed order between two (h, err) samples.
double observed_order(double h_coarse, double err_coarse, double h_fine, double err_fine);

}  // namespace cvf
