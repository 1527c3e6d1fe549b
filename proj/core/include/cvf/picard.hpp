/// @file picard.hpp
/// @brief Per-step fixed-point iteration v = H(v), the time loop, and the
/// nu-scaling transform.
///
/// One sweep of H transports rho and E against a frozen velocity, assembles
/// the momentum right-hand side from the transported fields and solves the
/// constant-density Lame system for the next velocity iterate. The density
/// mismatch (rho_bar - rho) d_t v is carried on the right-hand side.
#pragma once

#include <functional>
#include <vector>

#include "cvf/diagnostics.hpp"
#include "cvf/io/sinks.hpp"
#include "cvf/momentum.hpp"
#include "cvf/transport.hpp"

namespace cvf {

enum class IterateNorm { L2, Linf };

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 50;
  IterateNorm norm = IterateNorm::L2;
  double floor = 1e-30;  ///< lower bound on the denominator of the relative change

  void validate() const;
};

struct StepOptions {
  PicardOptions picard;
  TransportOptions transport;
  MomentumOptions momentum;

  void validate() const;
};

using VectorSource = std::function<void(double t, VectorField& out)>;

/// Additive sources for the three equations; empty members are skipped.
struct Forcing {
  ScalarSource rho;
  VectorSource u;
  TensorSource E;
};

struct PicardReport {
  int iterations = 0;                ///< sweeps performed
  std::vector<double> rel_changes;   ///< |v^{k+1} - v^k| / max(|v^k|, floor)
  std::vector<double> ratios;        ///< |v^{k+1} - v^k| / |v^k - v^{k-1}|
  double max_ratio = 0.0;
};

struct StepResult {
  FlowState state;
  PicardReport report;
};

/// Throws NonConvergence after max_iter sweeps, or when a later sweep produces
/// non-finite data or fails in transport. Transport errors in the very first
/// sweep propagate unchanged.
StepResult picard_step(SpectralWorkspace& ws, const FlowState& state, double dt,
                       const PhysParams& params, const StepOptions& opts,
                       const Forcing* forcing = nullptr);

/// |H(v*) - v*| / max(|v*|, floor) for an accepted step from `state` to
/// `accepted`.
double fixed_point_residual(SpectralWorkspace& ws, const FlowState& state,
                            const FlowState& accepted, double dt, const PhysParams& params,
                            const StepOptions& opts, const Forcing* forcing = nullptr);

struct RunConfig {
  double dt = 1e-3;
  double t_end = 0.0;         ///< 0 runs no steps
  long output_stride = 1;     ///< diagnostics every this many steps, plus the last
  long snapshot_stride = 0;   ///< 0: initial and final only
  StepOptions step;
  NormSpec norms;

  void validate() const;
  long step_count() const;
  /// Time after step k (k = 0 is the start), exactly t_end for the last.
  double time_at(long k) const;
};

/// Called after every accepted step with the step index (1-based).
using StepObserver = std::function<void(long step, const FlowState& state, const PicardReport&)>;

struct RunSinks {
  DiagnosticsSink* diagnostics = nullptr;
  SnapshotSink* snapshots = nullptr;
  StepObserver observer;
};

/// Marches `initial` to t_end. Errors from a step are rethrown with the step
/// index attached.
FlowState run(SpectralWorkspace& ws, const RunConfig& cfg, const FlowState& initial,
              const PhysParams& params, const RunSinks& sinks = {},
              const Forcing* forcing = nullptr);

struct ScalingTransform {
  double nu = 1.0;
  void validate() const;
};

/// y = nu x, s = nu^2 t, v = u / nu, rho and E unchanged; the box becomes nu L.
FlowState scale_state(const FlowState& state, double nu);
FlowState unscale_state(const FlowState& scaled, double nu);
PhysParams scale_params(const PhysParams& params, double nu);
RunConfig scale_config(const RunConfig& cfg, double nu);

/// Max over rho, u, E of max |a - b|.
double max_field_discrepancy(const FlowState& a, const FlowState& b);

}  // namespace cvf
