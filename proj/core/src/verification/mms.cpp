#include "cvf/verification/mms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "cvf/errors.hpp"

namespace cvf {

namespace {

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

MmsRow run_cell(const ManufacturedSolution& sol, int n, double dt, const PhysParams& params,
                const StepOptions& opts) {
  const Grid grid({n, n, n}, sol.length);
  SpectralWorkspace ws(grid);
  // Every source callback asks for one equation; evaluate all three once per time.
  struct Cache {
    double t = std::numeric_limits<double>::quiet_NaN();
    std::optional<ForcingFields> f;
  } cache;
  auto at = [&](double t) -> const ForcingFields& {
    if (!cache.f || cache.t != t) {
      cache.f.emplace(forcing_eval(sol, t, grid, params));
      cache.t = t;
    }
    return *cache.f;
  };
  Forcing forcing;
  forcing.rho = [&](double t, ScalarField& out) { out = at(t).g_rho; };
  forcing.u = [&](double t, VectorField& out) { out = at(t).g_u; };
  forcing.E = [&](double t, TensorField& out) { out = at(t).g_E; };

  RunConfig cfg;
  cfg.dt = dt;
  cfg.t_end = sol.t_end - sol.t_begin;
  cfg.step = opts;
  FlowState init = sol.exact(grid, sol.t_begin);
  // The run clock starts at zero; shift the forcing accordingly.
  const double t0 = sol.t_begin;
  Forcing shifted;
  shifted.rho = [&](double t, ScalarField& out) { forcing.rho(t + t0, out); };
  shifted.u = [&](double t, VectorField& out) { forcing.u(t + t0, out); };
  shifted.E = [&](double t, TensorField& out) { forcing.E(t + t0, out); };
  init.t = 0.0;
  const FlowState end = run(ws, cfg, init, params, {}, &shifted);
  const FlowState ref = sol.exact(grid, sol.t_end);

  MmsRow row;
  row.n = n;
  row.dt = dt;
  row.err_rho = max_diff(end.rho.data(), ref.rho.data());
  row.err_u = max_diff(end.u.data(), ref.u.data());
  row.err_E = max_diff(end.E.data(), ref.E.data());
  return row;
}

}  // namespace

double observed_order(double h_coarse, double err_coarse, double h_fine, double err_fine) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(err_coarse / err_fine) / std::log(h_coarse / h_fine);
}

const MmsRow& MmsTable::at(int n, double dt) const {
  for (const auto& r : rows) {
    if (r.n == n && r.dt == dt) return r;
  }
  throw Error(ErrorCode::InvalidParams, "no MMS row for N = " + std::to_string(n));
}

std::string MmsTable::to_csv() const {
  std::string s = "N,dt,err_rho,err_u,err_E,order_space,order_time\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.n, r.dt,
                  r.err_rho, r.err_u, r.err_E, r.order_space, r.order_time);
    s += buf;
  }
  return s;
}

MmsTable mms_run(const ManufacturedSolution& sol, const std::vector<int>& resolutions,
                 const std::vector<double>& dts, const PhysParams& params,
                 const StepOptions& opts) {
  sol.validate();
  params.validate();
  if (resolutions.empty() || dts.empty()) {
    throw Error(ErrorCode::InvalidParams, "mms_run needs at least one resolution and one dt");
  }
  MmsTable table;
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    for (std::size_t j = 0; j < dts.size(); ++j) {
      MmsRow row = run_cell(sol, resolutions[i], dts[j], params, opts);
      if (j > 0) {
        const MmsRow& prev = table.rows.back();
        row.order_time = observed_order(prev.dt, prev.err_max(), row.dt, row.err_max());
      }
      if (i > 0) {
        const MmsRow& prev = table.rows[table.rows.size() - dts.size()];
        row.order_space = observed_order(1.0 / prev.n, prev.err_max(), 1.0 / row.n, row.err_max());
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace cvf
