#include "cvf/picard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cvf/errors.hpp"
#include "cvf/operators.hpp"

namespace cvf {

namespace {

double iterate_norm(const VectorField& v, IterateNorm norm) {
  return norm == IterateNorm::L2 ? l2_norm(v) : max_pointwise_norm(v);
}

struct SweepOutput {
  ScalarField rho;
  TensorField E;
  VectorField v;
};

class Sweeper {
 public:
  Sweeper(SpectralWorkspace& ws, const FlowState& s0, double dt, const PhysParams& params,
          const StepOptions& opts, const Forcing* forcing)
      : ws_(ws), s0_(s0), dt_(dt), params_(params), opts_(opts), forcing_(forcing),
        fixed_(s0.grid()), rho_mean_(mean(s0.rho)) {
    const double th = opts.momentum.theta;
    fixed_ = momentum_forcing(ws, s0.rho, s0.u, s0.E, params);
    fixed_ *= (1.0 - th);
    if (forcing_ && forcing_->u) {
      VectorField g(s0.grid());
      forcing_->u(s0.t, g);
      fixed_.axpy(1.0 - th, g);
      forcing_->u(s0.t + dt, g);
      fixed_.axpy(th, g);
    }
  }

  SweepOutput operator()(const VectorField& v) {
    const double th = opts_.momentum.theta;
    const Grid& g = s0_.grid();
    VectorField w = v;
    if (th != 1.0) {
      w *= th;
      w.axpy(1.0 - th, s0_.u);
    }
    static const ScalarSource no_scalar;
    static const TensorSource no_tensor;
    const ScalarSource& srho = forcing_ ? forcing_->rho : no_scalar;
    const TensorSource& sE = forcing_ ? forcing_->E : no_tensor;

    SweepOutput out{advance_density(ws_, s0_.rho, w, dt_, opts_.transport, srho, s0_.t),
                    advance_deformation(ws_, s0_.E, w, dt_, opts_.transport, sE, s0_.t),
                    VectorField(g)};

    VectorField rhs = momentum_forcing(ws_, out.rho, v, out.E, params_);
    rhs *= th;
    rhs += fixed_;

    ScalarField rho_th = out.rho;
    if (th != 1.0) {
      rho_th *= th;
      rho_th.axpy(1.0 - th, s0_.rho);
    }
    double rho_bar = rho_mean_;
    if (opts_.momentum.density_lagging == DensityLagging::RhoWeighted) {
      const auto [lo, hi] = std::minmax_element(rho_th.data().begin(), rho_th.data().end());
      rho_bar = 0.5 * (*lo + *hi);
    }

    // (rho_bar - rho_theta) (v - u^n) / dt, dealiased
    VectorField corr(g);
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t p = 0; p < g.size(); ++p) {
        corr(c, p) = (rho_bar - rho_th[p]) * (v(c, p) - s0_.u(c, p)) / dt_;
      }
    }
    dealias(ws_, corr);
    rhs += corr;

    out.v = advance_velocity(ws_, s0_.u, rhs, dt_, rho_bar, params_, opts_.momentum);
    return out;
  }

 private:
  SpectralWorkspace& ws_;
  const FlowState& s0_;
  double dt_;
  const PhysParams& params_;
  const StepOptions& opts_;
  const Forcing* forcing_;
  VectorField fixed_;
  double rho_mean_;
};

bool transport_failure(ErrorCode c) {
  return c == ErrorCode::CflViolation || c == ErrorCode::PositivityLost ||
         c == ErrorCode::NonPositiveDensity;
}

void check_step_inputs(const FlowState& state, double dt, const PhysParams& params,
                       const StepOptions& opts) {
  params.validate();
  opts.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidParams, "time step must be positive and finite");
  }
  require_positive_density(state.rho, "picard_step");
}

}  // namespace

void PicardOptions::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw Error(ErrorCode::InvalidParams, "picard tol must be positive");
  }
  if (max_iter < 1) throw Error(ErrorCode::InvalidParams, "picard max_iter must be >= 1");
  if (!(floor > 0.0)) throw Error(ErrorCode::InvalidParams, "picard floor must be positive");
}

void StepOptions::validate() const {
  picard.validate();
  transport.validate();
  momentum.validate();
}

StepResult picard_step(SpectralWorkspace& ws, const FlowState& state, double dt,
                       const PhysParams& params, const StepOptions& opts, const Forcing* forcing) {
  check_step_inputs(state, dt, params, opts);
  Sweeper sweep(ws, state, dt, params, opts, forcing);
  PicardReport rep;
  VectorField v = state.u;
  double prev = -1.0;

  for (int k = 0; k < opts.picard.max_iter; ++k) {
    SweepOutput next = [&] {
      try {
        return sweep(v);
      } catch (const Error& e) {
        if (k == 0 || !transport_failure(e.code())) throw;
        throw Error(ErrorCode::NonConvergence,
                    "sweep " + std::to_string(k + 1) + " left the admissible set: " + e.what());
      }
    }();
    rep.iterations = k + 1;
    if (count_nonfinite(next.v) != 0) {
      throw Error(ErrorCode::NonConvergence,
                  "velocity iterate became non-finite at sweep " + std::to_string(k + 1));
    }
    const double d = iterate_norm(next.v - v, opts.picard.norm);
    const double rel = d / std::max(iterate_norm(v, opts.picard.norm), opts.picard.floor);
    rep.rel_changes.push_back(rel);
    if (prev > 0.0) {
      const double r = d / prev;
      rep.ratios.push_back(r);
      rep.max_ratio = std::max(rep.max_ratio, r);
    }
    if (d == 0.0 || rel < opts.picard.tol) {
      FlowState out(state.grid());
      out.rho = std::move(next.rho);
      out.E = std::move(next.E);
      out.u = std::move(next.v);
      out.t = state.t + dt;
      return {std::move(out), std::move(rep)};
    }
    v = std::move(next.v);
    prev = d;
  }
  throw Error(ErrorCode::NonConvergence,
              "no convergence in " + std::to_string(opts.picard.max_iter) +
                  " sweeps; last relative change " + std::to_string(rep.rel_changes.back()) +
                  ", max contraction ratio " + std::to_string(rep.max_ratio));
}

double fixed_point_residual(SpectralWorkspace& ws, const FlowState& state,
                            const FlowState& accepted, double dt, const PhysParams& params,
                            const StepOptions& opts, const Forcing* forcing) {
  check_step_inputs(state, dt, params, opts);
  Sweeper sweep(ws, state, dt, params, opts, forcing);
  const SweepOutput h = sweep(accepted.u);
  return iterate_norm(h.v - accepted.u, opts.picard.norm) /
         std::max(iterate_norm(accepted.u, opts.picard.norm), opts.picard.floor);
}

// ------------------------------------------------------------------- run loop

void RunConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidParams, "dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidParams, "t_end must be finite and >= 0");
  }
  if (output_stride < 1) throw Error(ErrorCode::InvalidParams, "output stride must be >= 1");
  if (snapshot_stride < 0) throw Error(ErrorCode::InvalidParams, "snapshot stride must be >= 0");
  if (t_end / dt > 1e8) throw Error(ErrorCode::InvalidParams, "t_end / dt exceeds the step budget");
  step.validate();
  norms.validate();
}

long RunConfig::step_count() const {
  if (t_end == 0.0) return 0;
  return std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
}

double RunConfig::time_at(long k) const {
  const long n = step_count();
  if (k >= n) return t_end;
  return static_cast<double>(k) * dt;
}

FlowState run(SpectralWorkspace& ws, const RunConfig& cfg, const FlowState& initial,
              const PhysParams& params, const RunSinks& sinks, const Forcing* forcing) {
  cfg.validate();
  params.validate();
  const long n = cfg.step_count();
  FlowState state = initial;

  DiagnosticsRecord first = diagnose(ws, state, params, cfg.norms);
  const double e0 = first.energy().total(params);
  double diss_cum = 0.0;
  double rate_prev = first.diss_rate;
  if (sinks.diagnostics) sinks.diagnostics->write(first);
  if (sinks.snapshots) sinks.snapshots->write(state, 0);

  long window_iters = 0;
  double window_ratio = 0.0;
  for (long k = 1; k <= n; ++k) {
    const double t0 = cfg.time_at(k - 1);
    const double t1 = cfg.time_at(k);
    StepResult res = [&] {
      try {
        return picard_step(ws, state, t1 - t0, params, cfg.step, forcing);
      } catch (const Error& e) {
        throw e.with_step(k);
      }
    }();
    state = std::move(res.state);
    state.t = t1;
    window_iters = std::max<long>(window_iters, res.report.iterations);
    window_ratio = std::max(window_ratio, res.report.max_ratio);

    const double rate = dissipation_rate(ws, state.u, params);
    diss_cum += 0.5 * (t1 - t0) * (rate_prev + rate);
    rate_prev = rate;

    if (sinks.observer) sinks.observer(k, state, res.report);

    if (sinks.diagnostics && (k % cfg.output_stride == 0 || k == n)) {
      DiagnosticsRecord r = [&] {
        try {
          return diagnose(ws, state, params, cfg.norms);
        } catch (const Error& e) {
          throw e.with_step(k);
        }
      }();
      r.diss_cum = diss_cum;
      r.balance_res = std::abs(r.energy().total(params) + diss_cum - e0) / std::max(e0, 1e-30);
      r.picard_iters = window_iters;
      r.picard_ratio_max = window_ratio;
      sinks.diagnostics->write(r);
      window_iters = 0;
      window_ratio = 0.0;
    }
    if (sinks.snapshots && ((cfg.snapshot_stride > 0 && k % cfg.snapshot_stride == 0) || k == n)) {
      sinks.snapshots->write(state, k);
    }
  }
  return state;
}

// -------------------------------------------------------------------- scaling

void ScalingTransform::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw Error(ErrorCode::InvalidParams, "scaling nu must be positive");
  }
}

FlowState scale_state(const FlowState& state, double nu) {
  ScalingTransform{nu}.validate();
  FlowState out(state.grid().scaled(nu));
  std::copy(state.rho.data().begin(), state.rho.data().end(), out.rho.data().begin());
  std::copy(state.E.data().begin(), state.E.data().end(), out.E.data().begin());
  const auto src = state.u.data();
  auto dst = out.u.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / nu;
  out.t = state.t * nu * nu;
  return out;
}

FlowState unscale_state(const FlowState& scaled, double nu) {
  ScalingTransform{nu}.validate();
  FlowState out(scaled.grid().scaled(1.0 / nu));
  std::copy(scaled.rho.data().begin(), scaled.rho.data().end(), out.rho.data().begin());
  std::copy(scaled.E.data().begin(), scaled.E.data().end(), out.E.data().begin());
  const auto src = scaled.u.data();
  auto dst = out.u.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] * nu;
  out.t = scaled.t / (nu * nu);
  return out;
}

PhysParams scale_params(const PhysParams& params, double nu) {
  ScalingTransform{nu}.validate();
  PhysParams p = params;
  p.nu = params.nu * nu;
  return p;
}

RunConfig scale_config(const RunConfig& cfg, double nu) {
  ScalingTransform{nu}.validate();
  RunConfig c = cfg;
  c.dt = cfg.dt * nu * nu;
  c.t_end = cfg.t_end * nu * nu;
  return c;
}

double max_field_discrepancy(const FlowState& a, const FlowState& b) {
  if (a.rho.points() != b.rho.points()) {
    throw Error(ErrorCode::InvalidGrid, "max_field_discrepancy: grids differ in size");
  }
  double m = 0.0;
  auto scan = [&](std::span<const double> x, std::span<const double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  };
  scan(a.rho.data(), b.rho.data());
  scan(a.u.data(), b.u.data());
  scan(a.E.data(), b.E.data());
  return m;
}

}  // namespace cvf
