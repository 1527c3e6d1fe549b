#include "cvf_cli/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <limits>
#include <map>

#include "cvf/diagnostics.hpp"
#include "cvf/errors.hpp"
#include "cvf/initial_condition.hpp"
#include "cvf/io/config.hpp"
#include "cvf/io/csv.hpp"
#include "cvf/io/sinks.hpp"
#include "cvf/io/snapshot.hpp"
#include "cvf/picard.hpp"
#include "cvf/verification/mms.hpp"
#include "cvf/verification/oracle_compare.hpp"

namespace cvf::cli {

namespace {

namespace fs = std::filesystem;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NonConvergence:
      return kExitNonConvergence;
    case ErrorCode::ConfigError:
    case ErrorCode::MapNotInvertible:
    case ErrorCode::FormatError:
      return kExitBadInput;
    default:
      return kExitFailure;
  }
}

std::string g17(double x) {
  std::ostringstream o;
  o << std::setprecision(17) << x;
  return o.str();
}

const std::map<std::string, TransportScheme> kSchemes = {
    {"spectral-rk4", TransportScheme::SpectralRk4},
    {"semi-lagrangian-rk2", TransportScheme::SemiLagrangianRk2},
};

struct RunArgs {
  std::string config;
  std::string out;
  double theta = 1.0;
  std::string scheme = "spectral-rk4";
};

int cmd_run(const RunArgs& a, std::ostream& out) {
  const Config cfg = load_config(a.config);
  const fs::path dir = a.out.empty() ? fs::path(cfg.output_dir) : fs::path(a.out);
  const Grid grid = cfg.grid();
  SpectralWorkspace ws(grid);
  RunConfig rc = cfg.run_config();
  rc.step.momentum.theta = a.theta;
  rc.step.transport.scheme = kSchemes.at(a.scheme);
  const IcResult ic = generate_ic(cfg.ic, grid, cfg.params, ws);

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  CsvDiagnosticsSink diag(dir / "diagnostics.csv");
  DirectorySnapshotSink snaps(dir);
  RunSinks sinks{&diag, &snaps, {}};
  const FlowState end = run(ws, rc, ic.state, cfg.params, sinks);
  out << "completed " << rc.step_count() << " steps to t = " << g17(end.t) << ", output in "
      << dir.string() << '\n';
  return kExitOk;
}

int cmd_diagnose(const std::string& snapshot, double q, const std::string& config,
                 std::ostream& out) {
  PhysParams params;
  if (!config.empty()) params = load_config(config).params;
  const FlowState st = read_snapshot(snapshot);
  SpectralWorkspace ws(st.grid());
  NormSpec spec;
  spec.q = q;
  const DiagnosticsRecord r = diagnose(ws, st, params, spec);
  out << format_csv_header() << '\n' << format_csv_row(r) << '\n';
  return kExitOk;
}

int cmd_mms(const std::vector<int>& ns, const std::vector<double>& dts, double theta,
            double t_end, double amplitude, std::ostream& out) {
  PhysParams params;
  const ManufacturedSolution sol = trig_solution(2.0 * std::numbers::pi, amplitude, t_end);
  StepOptions opts;
  opts.momentum.theta = theta;
  opts.picard.tol = 1e-12;
  out << mms_run(sol, ns, dts, params, opts).to_csv();
  return kExitOk;
}

int cmd_scale_check(const std::string& config, double nu, double tol, std::ostream& out) {
  const Config cfg = load_config(config);
  const Grid grid = cfg.grid();
  SpectralWorkspace ws(grid);
  const RunConfig rc = cfg.run_config();
  const FlowState init = generate_ic(cfg.ic, grid, cfg.params, ws).state;
  const FlowState direct = run(ws, rc, init, cfg.params);

  const FlowState sinit = scale_state(init, nu);
  SpectralWorkspace sws(sinit.grid());
  const FlowState scaled_end =
      run(sws, scale_config(rc, nu), sinit, scale_params(cfg.params, nu));
  const double d = max_field_discrepancy(direct, unscale_state(scaled_end, nu));
  out << "nu = " << g17(nu) << " max field discrepancy = " << g17(d) << '\n';
  return d <= tol ? kExitOk : kExitNonConvergence;
}

int cmd_oracle(int n, std::uint64_t seed, int steps, double dt, double amplitude,
               std::ostream& out) {
  OracleCompareSpec spec;
  spec.oracle.n = n;
  spec.oracle.steps = steps;
  spec.oracle.dt = dt;
  spec.seed = seed;
  spec.amplitude = amplitude;
  const OracleComparison r = oracle_compare(spec);
  out << "field,diff,richardson_estimate\n"
      << "rho," << g17(r.diff_rho) << ',' << g17(r.est_rho) << '\n'
      << "u," << g17(r.diff_u) << ',' << g17(r.est_u) << '\n'
      << "E," << g17(r.diff_E) << ',' << g17(r.est_E) << '\n'
      << "agreement ratio = " << g17(r.ratio()) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cvflab: pseudo-spectral viscoelastic flow simulator and verification tools"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "run a simulation from a config file");
  run_cmd->add_option("--config", run_args.config, "config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_args.out, "output directory (default: output.dir)");
  run_cmd->add_option("--theta", run_args.theta, "implicitness of the viscous term")
      ->check(CLI::Range(0.5, 1.0));
  run_cmd->add_option("--scheme", run_args.scheme, "transport scheme")
      ->check(CLI::IsMember({"spectral-rk4", "semi-lagrangian-rk2"}));

  std::string snapshot, diag_config;
  double q = 4.0;
  auto* diag_cmd = app.add_subcommand("diagnose", "print the diagnostics of one snapshot");
  diag_cmd->add_option("--snapshot", snapshot, "snapshot file")->required();
  diag_cmd->add_option("--q", q, "norm exponent (> 3)");
  diag_cmd->add_option("--config", diag_config, "config providing the physical parameters");

  std::vector<int> ns = {8, 16};
  std::vector<double> dts = {1e-3, 5e-4};
  double theta = 1.0, t_end = 0.05, amplitude = 0.05;
  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence table");
  mms_cmd->add_option("--resolutions", ns, "grid sizes")->delimiter(',');
  mms_cmd->add_option("--dts", dts, "time steps")->delimiter(',');
  mms_cmd->add_option("--theta", theta, "implicitness of the viscous term")->check(CLI::Range(0.5, 1.0));
  mms_cmd->add_option("--t-end", t_end, "length of the time window");
  mms_cmd->add_option("--amplitude", amplitude, "amplitude of the manufactured modes");

  std::string sc_config;
  double nu = 2.0, tol = 1e-10;
  auto* sc_cmd = app.add_subcommand("scale-check", "compare scaled and direct runs");
  sc_cmd->add_option("--config", sc_config, "config file")->required()->check(CLI::ExistingFile);
  sc_cmd->add_option("--nu", nu, "scaling parameter")->required();
  sc_cmd->add_option("--tol", tol, "largest accepted discrepancy");

  int on = 8, steps = 100;
  std::uint64_t seed = 0;
  double odt = 1e-4, oamp = 1e-3;
  auto* or_cmd = app.add_subcommand("oracle-compare", "main solver against the finite-difference reference");
  or_cmd->add_option("--n", on, "grid size (<= 8)");
  or_cmd->add_option("--seed", seed, "seed of the initial data");
  or_cmd->add_option("--steps", steps, "number of steps");
  or_cmd->add_option("--dt", odt, "time step");
  or_cmd->add_option("--amplitude", oamp, "amplitude of the initial data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_args, out);
    if (diag_cmd->parsed()) return cmd_diagnose(snapshot, q, diag_config, out);
    if (mms_cmd->parsed()) return cmd_mms(ns, dts, theta, t_end, amplitude, out);
    if (sc_cmd->parsed()) return cmd_scale_check(sc_config, nu, tol, out);
    if (or_cmd->parsed()) return cmd_oracle(on, seed, steps, odt, oamp, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cvf::cli
