#include "cvf/verification/oracle_compare.hpp"

#include <algorithm>
#include <cmath>

#include "cvf/errors.hpp"
#include "cvf/initial_condition.hpp"

namespace cvf {

namespace {

template <std::size_t N>
double max_diff(const Field<N>& a, const Field<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// Samples of a 2N field at the points of the N grid.
template <std::size_t N>
Field<N> restrict_to(const Field<N>& fine, const Grid& coarse) {
  Field<N> out(coarse);
  const Grid& fg = fine.grid();
  for (std::size_t c = 0; c < N; ++c) {
    for (int iz = 0; iz < coarse.nz(); ++iz) {
      for (int iy = 0; iy < coarse.ny(); ++iy) {
        for (int ix = 0; ix < coarse.nx(); ++ix) {
          out(c, coarse.index(ix, iy, iz)) = fine(c, fg.index(2 * ix, 2 * iy, 2 * iz));
        }
      }
    }
  }
  return out;
}

double safe_ratio(double diff, double est) {
  if (diff == 0.0) return 0.0;
  if (!(est > 0.0)) return std::numeric_limits<double>::infinity();
  return diff / est;
}

}  // namespace

double OracleComparison::ratio() const noexcept {
  return std::max({safe_ratio(diff_rho, est_rho), safe_ratio(diff_u, est_u),
                   safe_ratio(diff_E, est_E)});
}

OracleComparison oracle_compare(const OracleCompareSpec& spec) {
  spec.oracle.validate();
  if (spec.oracle.n > 8) {
    throw Error(ErrorCode::InvalidGrid, "oracle comparison needs N <= 8 so that 2N <= 16");
  }
  const int n = spec.oracle.n;
  const Grid coarse = Grid::cube(n);
  const Grid fine = Grid::cube(2 * n);

  ICSpec ic;
  ic.amplitude = spec.amplitude;
  ic.modes = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  ic.seed = spec.seed;
  ic.velocity_amplitude = spec.amplitude;

  SpectralWorkspace ws_c(coarse), ws_f(fine);
  const FlowState init_c = generate_ic(ic, coarse, spec.params, ws_c).state;
  const FlowState init_f = generate_ic(ic, fine, spec.params, ws_f).state;

  OracleConfig oc = spec.oracle;
  const FlowState fd_c = fd_reference_run(init_c, spec.params, oc);
  oc.n = 2 * n;
  const FlowState fd_f = fd_reference_run(init_f, spec.params, oc);

  RunConfig rc;
  rc.dt = spec.oracle.dt;
  rc.t_end = spec.oracle.dt * spec.oracle.steps;
  rc.step = spec.step;
  rc.output_stride = std::max(1, spec.oracle.steps);
  const FlowState main = run(ws_c, rc, init_c, spec.params);

  const ScalarField rf = restrict_to(fd_f.rho, coarse);
  const VectorField uf = restrict_to(fd_f.u, coarse);
  const TensorField Ef = restrict_to(fd_f.E, coarse);

  OracleComparison r;
  r.diff_rho = max_diff(main.rho, fd_c.rho);
  r.diff_u = max_diff(main.u, fd_c.u);
  r.diff_E = max_diff(main.E, fd_c.E);
  r.est_rho = 4.0 / 3.0 * max_diff(fd_c.rho, rf);
  r.est_u = 4.0 / 3.0 * max_diff(fd_c.u, uf);
  r.est_E = 4.0 / 3.0 * max_diff(fd_c.E, Ef);
  return r;
}

}  // namespace cvf
