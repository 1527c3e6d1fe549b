// Acceptance suite: one PASS/FAIL line per criterion. Arguments select a
// subset of criteria by number; no arguments runs all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "config_fuzz.hpp"
#include "cvf/diagnostics.hpp"
#include "cvf/errors.hpp"
#include "cvf/initial_condition.hpp"
#include "cvf/io/csv.hpp"
#include "cvf/io/sinks.hpp"
#include "cvf/io/snapshot.hpp"
#include "cvf/operators.hpp"
#include "cvf/picard.hpp"
#include "cvf/transport.hpp"
#include "cvf/verification/manufactured.hpp"
#include "cvf/verification/mms.hpp"
#include "cvf/verification/oracle_compare.hpp"
#include "cvf_cli/cli.hpp"

using namespace cvf;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { lines.push_back("     " + what); }
};

PhysParams base_params() {
  PhysParams p;
  p.mu = 1.0;
  p.lambda = 0.0;
  p.gamma = 2.0;
  p.nu = 1.0;
  return p;
}

ICSpec base_ic(double amplitude) {
  ICSpec s;
  s.amplitude = amplitude;
  s.velocity_amplitude = amplitude;
  s.modes = {{1, 0, 0}, {0, 3, 1}, {2, -1, 1}};
  s.seed = 7;
  return s;
}

StepOptions base_step() {
  StepOptions o;
  o.momentum.theta = 0.5;
  o.picard.tol = 1e-12;
  return o;
}

constexpr double kT = 0.1;

// One run of the compatible small-data problem with everything later
// criteria need from it.
struct SmallDataRun {
  explicit SmallDataRun(const Grid& g) : initial(g), final_state(g) {}
  int n = 0;
  double dt = 0.0;
  FlowState initial;
  FlowState final_state;
  std::vector<DiagnosticsRecord> records;
  int max_iters = 0;
  double max_ratio = 0.0;
  double sigma_linf = 0.0;  ///< largest sigma evolution residual over the run
  double sigma_full_linf = 0.0;  ///< same residual with grad div u added
  double seconds = 0.0;
};

// Central residual of sigma_t + grad(u . sigma) + grad div u over a 3-state window.
double sigma_full_residual(SpectralWorkspace& ws, const std::vector<ScalarField>& rho,
                           const std::vector<VectorField>& u, double dt) {
  const VectorField s0 = sigma_from_density(ws, rho[0]).sigma;
  const VectorField s1 = sigma_from_density(ws, rho[1]).sigma;
  const VectorField s2 = sigma_from_density(ws, rho[2]).sigma;
  ScalarField us(rho[1].grid());
  for (std::size_t p = 0; p < us.points(); ++p) {
    double acc = 0.0;
    for (std::size_t a = 0; a < 3; ++a) acc += u[1](a, p) * s1(a, p);
    us[p] = acc;
  }
  dealias(ws, us);
  VectorField r = gradient(ws, us);
  r.axpy(1.0, gradient(ws, divergence(ws, u[1])));
  r.axpy(1.0 / (2.0 * dt), s2);
  r.axpy(-1.0 / (2.0 * dt), s0);
  return max_pointwise_norm(r);
}

SmallDataRun small_data_run(int n, double dt, long stride, bool track_sigma) {
  const Grid g = Grid::cube(n);
  SpectralWorkspace ws(g);
  SmallDataRun r(g);
  r.n = n;
  r.dt = dt;
  const auto t0 = Clock::now();
  r.initial = generate_ic(base_ic(1e-2), g, base_params(), ws).state;
  RunConfig c;
  c.dt = dt;
  c.t_end = kT;
  c.output_stride = stride;
  c.step = base_step();
  MemoryDiagnosticsSink diag;
  std::vector<ScalarField> rho_win{r.initial.rho};
  std::vector<VectorField> u_win{r.initial.u};
  RunSinks sinks;
  sinks.diagnostics = &diag;
  sinks.observer = [&](long, const FlowState& s, const PicardReport& rep) {
    r.max_iters = std::max(r.max_iters, rep.iterations);
    r.max_ratio = std::max(r.max_ratio, rep.max_ratio);
    if (!track_sigma) return;
    rho_win.push_back(s.rho);
    u_win.push_back(s.u);
    if (rho_win.size() > 3) {
      rho_win.erase(rho_win.begin());
      u_win.erase(u_win.begin());
    }
    if (rho_win.size() == 3) {
      r.sigma_linf = std::max(r.sigma_linf, sigma_evolution_residual(ws, rho_win, u_win, dt).linf);
      r.sigma_full_linf = std::max(r.sigma_full_linf, sigma_full_residual(ws, rho_win, u_win, dt));
    }
  };
  r.final_state = run(ws, c, r.initial, base_params(), sinks);
  r.records = std::move(diag.records);
  r.seconds = seconds_since(t0);
  return r;
}

class Runs {
 public:
  const SmallDataRun& at(double dt) {
    auto it = cache_.find(dt);
    if (it == cache_.end()) {
      std::printf("  ... small-data run N=32 dt=%g\n", dt);
      std::fflush(stdout);
      it = cache_.emplace(dt, small_data_run(32, dt, 10, true)).first;
    }
    return it->second;
  }
  const SmallDataRun& fine() {
    if (!fine_) {
      std::printf("  ... small-data run N=64 dt=1e-3\n");
      std::fflush(stdout);
      fine_ = small_data_run(64, 1e-3, 100, false);
    }
    return *fine_;
  }

 private:
  std::map<double, SmallDataRun> cache_;
  std::optional<SmallDataRun> fine_;
};

const std::vector<double> kDts = {2e-3, 1e-3, 5e-4};

// ---------------------------------------------------------------------------

Outcome equilibrium_fixed_point(Runs&) {
  Outcome o;
  const auto t0 = Clock::now();
  const Grid g = Grid::cube(16);
  SpectralWorkspace ws(g);
  const auto eq = FlowState::equilibrium(g);
  RunConfig c;
  c.dt = 1e-3;
  c.t_end = 0.1;
  c.output_stride = 1;
  c.step = base_step();
  MemoryDiagnosticsSink d;
  const auto out = run(ws, c, eq, base_params(), {&d, nullptr, {}});
  const double secs = seconds_since(t0);
  const double V = g.volume();
  double worst = 0.0;
  for (const auto& r : d.records) {
    for (double x : {r.e_kin, r.e_elastic_E, r.e_press, r.diss_rate, r.diss_cum, r.balance_res,
                     r.curl_linf, r.curl_l2, r.piola_l2, r.trace_int, r.sigma_lq, r.gradE_lq, r.E_w1q,
                     r.Z_l2, (r.mass - V) / V, (r.e_elastic_F - 1.5 * V) / V, r.rho_min - 1.0,
                     r.rho_max - 1.0})
      worst = std::max(worst, std::abs(x));
  }
  const double drift = max_field_discrepancy(out, eq);
  o.check(c.step_count() == 100 && d.records.size() == 101, "100 steps recorded");
  o.check(drift <= 1e-12, fmt("state max-norm change %.3e <= 1e-12", drift));
  o.check(worst <= 1e-12, fmt("largest diagnostic deviation %.3e <= 1e-12", worst));
  o.check(secs < 10.0, fmt("runtime %.2f s < 10 s", secs));
  return o;
}

Outcome energy_balance(Runs& runs) {
  Outcome o;
  std::vector<double> res;
  double secs = 0.0;
  for (double dt : kDts) {
    const auto& r = runs.at(dt);
    res.push_back(energy_balance_residual(r.records, base_params()));
    secs += r.seconds;
    o.note(fmt("dt=%g  balance residual %.4e  (%.1f s)", dt, res.back(), r.seconds));
  }
  o.check(res[1] <= 1e-4, fmt("residual at dt=1e-3 %.3e <= 1e-4", res[1]));
  for (std::size_t i = 1; i < res.size(); ++i) {
    const double p = std::log2(res[i - 1] / res[i]);
    o.check(p >= 1.9, fmt("observed order dt=%g -> %g: %.3f >= 1.9", kDts[i - 1], kDts[i], p));
  }
  o.check(secs < 300.0, fmt("runtime %.1f s < 300 s", secs));
  return o;
}

Outcome constraint_propagation(Runs& runs) {
  Outcome o;
  const auto& c = runs.at(1e-3);
  const auto& f = runs.fine();
  const auto& c0 = c.records.front();
  double curl_max = 0.0, piola_max = 0.0;
  for (const auto& r : c.records) {
    curl_max = std::max(curl_max, r.curl_linf);
    piola_max = std::max(piola_max, r.piola_l2);
  }
  const double floor = 1e-14;
  const double curl_growth = curl_max / std::max(c0.curl_linf, floor);
  const double piola_growth = piola_max / std::max(c0.piola_l2, floor);
  o.note(fmt("N=32 curl %.3e -> %.3e, Piola %.3e -> %.3e", c0.curl_linf, c.records.back().curl_linf,
             c0.piola_l2, c.records.back().piola_l2));
  o.note(fmt("N=64 curl %.3e -> %.3e, Piola %.3e -> %.3e  (%.1f s)", f.records.front().curl_linf,
             f.records.back().curl_linf, f.records.front().piola_l2, f.records.back().piola_l2, f.seconds));
  o.check(curl_growth < 10.0, fmt("curl residual growth %.3f < 10", curl_growth));
  o.check(piola_growth < 10.0, fmt("Piola residual growth %.3f < 10", piola_growth));
  const double cr = f.records.back().curl_linf / c.records.back().curl_linf;
  const double pr = f.records.back().piola_l2 / c.records.back().piola_l2;
  o.check(cr <= 0.5, fmt("curl N=64 / N=32 at T: %.3e <= 0.5", cr));
  o.check(pr <= 0.5, fmt("Piola N=64 / N=32 at T: %.3e <= 0.5", pr));
  return o;
}

Outcome conservation(Runs& runs) {
  Outcome o;
  const auto& r = runs.at(1e-3);
  const double m0 = r.records.front().mass;
  double mass_dev = 0.0, trace_drift = 0.0;
  for (const auto& d : r.records) {
    mass_dev = std::max(mass_dev, std::abs(d.mass - m0) / m0);
    trace_drift = std::max(trace_drift, std::abs(d.trace_int - r.records.front().trace_int));
  }
  const double bal = r.records.back().balance_res;
  o.check(mass_dev <= 1e-12, fmt("relative mass drift %.3e <= 1e-12", mass_dev));
  o.check(trace_drift <= 10.0 * bal, fmt("trace integral drift %.3e <= 10 x balance %.3e", trace_drift, bal));
  return o;
}

Outcome picard_contraction(Runs& runs) {
  Outcome o;
  for (double dt : kDts) {
    const auto& r = runs.at(dt);
    o.check(r.max_iters <= 50 && r.max_ratio < 1.0,
            fmt("dt=%g: max iterations %d <= 50, max ratio %.4f < 1", dt, r.max_iters, r.max_ratio));
  }
  // Ten times the amplitude with a hundred times the step.
  const Grid g = Grid::cube(32);
  SpectralWorkspace ws(g);
  const auto ic = generate_ic(base_ic(1e-1), g, base_params(), ws).state;
  bool nonconv = false;
  std::string what = "converged";
  try {
    const auto s = picard_step(ws, ic, 1e-1, base_params(), base_step());
    what = fmt("converged in %d sweeps, max ratio %.4f", s.report.iterations, s.report.max_ratio);
  } catch (const Error& e) {
    nonconv = e.code() == ErrorCode::NonConvergence;
    what = e.what();
  }
  o.check(nonconv, "amplitude 1e-1, dt 1e-1 raises NonConvergence: " + what);
  return o;
}

Outcome scaling_equivalence(Runs& runs) {
  Outcome o;
  const auto& a = runs.at(1e-3);
  const auto& b = runs.at(5e-4);
  // Second-order Richardson estimate of the dt = 1e-3 error.
  const double est = 4.0 / 3.0 * max_field_discrepancy(a.final_state, b.final_state);

  const double nu = 2.0;
  const FlowState sinit = scale_state(a.initial, nu);
  SpectralWorkspace ws(sinit.grid());
  RunConfig c;
  c.dt = 1e-3;
  c.t_end = kT;
  c.step = base_step();
  const FlowState s_end = run(ws, scale_config(c, nu), sinit, scale_params(base_params(), nu));
  const double d = max_field_discrepancy(unscale_state(s_end, nu), a.final_state);
  o.check(d <= 5.0 * est, fmt("nu=2 discrepancy %.3e <= 5 x estimate %.3e", d, est));

  const fs::path dir = fs::temp_directory_path() / "cvf_acceptance_scale";
  fs::create_directories(dir);
  std::string text = cvf::test::baseline_config_text();
  std::ofstream(dir / "c.cfg") << text;
  const std::string cfg = (dir / "c.cfg").string();
  const char* argv[] = {"cvflab", "scale-check", "--config", cfg.c_str(), "--nu", "1", "--tol", "1e-14"};
  std::ostringstream out, err;
  const int rc = cli::run_cli(8, argv, out, err);
  std::string line = out.str();
  if (!line.empty() && line.back() == '\n') line.pop_back();
  o.check(rc == cli::kExitOk, "scale-check --nu 1 within 1e-14: " + line);
  fs::remove_all(dir);
  return o;
}

Outcome oracle_equivalence(Runs&) {
  Outcome o;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    OracleCompareSpec spec;
    spec.oracle.n = 8;
    spec.oracle.dt = 1e-4;
    spec.oracle.steps = 100;
    spec.amplitude = 1e-3;
    spec.seed = seed;
    const auto r = oracle_compare(spec);
    o.check(r.ratio() <= 5.0,
            fmt("seed %llu: rho %.2e/%.2e  u %.2e/%.2e  E %.2e/%.2e  ratio %.3f <= 5",
                static_cast<unsigned long long>(seed), r.diff_rho, r.est_rho, r.diff_u, r.est_u,
                r.diff_E, r.est_E, r.ratio()));
  }
  const double secs = seconds_since(t0);
  o.check(secs < 60.0, fmt("runtime %.2f s < 60 s", secs));
  return o;
}

Outcome mms_convergence(Runs&) {
  Outcome o;
  const auto t0 = Clock::now();
  const auto sol = trig_solution(2.0 * std::numbers::pi, 0.05, 0.05);
  StepOptions half = base_step();
  const auto t_half = mms_run(sol, {8, 16}, {1e-3, 5e-4}, base_params(), half);
  StepOptions full = base_step();
  full.momentum.theta = 1.0;
  const auto t_full = mms_run(sol, {16}, {1e-3, 5e-4}, base_params(), full);
  for (const auto& r : t_half.rows)
    o.note(fmt("theta=1/2 N=%d dt=%g err %.3e", r.n, r.dt, r.err_max()));
  for (const auto& r : t_full.rows) o.note(fmt("theta=1   N=%d dt=%g err %.3e", r.n, r.dt, r.err_max()));
  const double ratio = t_half.at(8, 1e-3).err_max() / t_half.at(16, 1e-3).err_max();
  o.check(ratio >= 8.0, fmt("spatial error ratio N=8 -> 16 at dt=1e-3: %.1f >= 8", ratio));
  const double p1 = t_full.at(16, 5e-4).order_time;
  const double p2 = t_half.at(16, 5e-4).order_time;
  o.check(p1 >= 0.9, fmt("temporal order theta=1: %.3f >= 0.9", p1));
  o.check(p2 >= 1.9, fmt("temporal order theta=1/2: %.3f >= 1.9", p2));
  const double secs = seconds_since(t0);
  o.check(secs < 300.0, fmt("runtime %.1f s < 300 s", secs));
  return o;
}

Outcome density_and_sigma(Runs& runs) {
  Outcome o;
  double lo = 1e300, hi = -1e300;
  std::vector<double> sig;
  for (double dt : kDts) {
    const auto& r = runs.at(dt);
    for (const auto& d : r.records) {
      lo = std::min(lo, d.rho_min);
      hi = std::max(hi, d.rho_max);
    }
    lo = std::min(lo, validate(r.final_state).rho_min);
    hi = std::max(hi, validate(r.final_state).rho_max);
    sig.push_back(r.sigma_linf);
    o.note(fmt("dt=%g  sigma evolution residual %.4e  (with grad div u: %.4e)", dt, r.sigma_linf,
               r.sigma_full_linf));
  }
  o.check(lo >= 0.5 && hi <= 1.5, fmt("density range [%.6f, %.6f] within [1/2, 3/2]", lo, hi));
  for (std::size_t i = 1; i < sig.size(); ++i) {
    const double p = std::log2(sig[i - 1] / sig[i]);
    o.check(p >= 1.9, fmt("sigma residual order dt=%g -> %g: %.3f >= 1.9", kDts[i - 1], kDts[i], p));
  }
  return o;
}

Outcome format_contracts(Runs& runs) {
  Outcome o;
  const auto& r = runs.at(1e-3);
  const auto bytes = encode_snapshot(r.final_state);
  const FlowState back = decode_snapshot(bytes);
  o.check(back == r.final_state && encode_snapshot(back) == bytes,
          fmt("snapshot round trip bitwise (%zu bytes)", bytes.size()));

  const fs::path dir = fs::temp_directory_path() / "cvf_acceptance_csv";
  fs::create_directories(dir);
  write_diagnostics_csv(dir / "d.csv", r.records);
  std::ifstream in(dir / "d.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto parsed = parse_diagnostics_csv(ss.str());
  fs::remove_all(dir);
  o.check(parsed == r.records, fmt("CSV round trip value exact (%zu records)", r.records.size()));

  const auto f = cvf::test::fuzz_configs(2024, 1000);
  o.check(f.total == 1000 && f.clean(),
          fmt("config fuzz: %d inputs, %d rejected with ConfigError, %d accepted, %d unclean", f.total,
              f.rejected, f.accepted, f.wrong_code + f.unnamed + f.foreign + f.unstable));
  if (!f.first_problem.empty()) o.note(f.first_problem);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(Runs&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "equilibrium fixed point", equilibrium_fixed_point},
      {2, "energy balance", energy_balance},
      {3, "constraint propagation", constraint_propagation},
      {4, "mass and trace conservation", conservation},
      {5, "Picard contraction", picard_contraction},
      {6, "scaling equivalence", scaling_equivalence},
      {7, "oracle equivalence", oracle_equivalence},
      {8, "MMS convergence", mms_convergence},
      {9, "density bounds and sigma evolution", density_and_sigma},
      {10, "format contracts", format_contracts},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  Runs runs;
  int failed = 0;
  std::vector<std::string> summary;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    std::printf("== criterion %d: %s\n", c.id, c.name);
    std::fflush(stdout);
    const auto t0 = Clock::now();
    Outcome out;
    try {
      out = c.fn(runs);
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    for (const auto& l : out.lines) std::printf("  %s\n", l.c_str());
    const std::string line =
        fmt("%s criterion %d: %s (%.1f s)", out.pass ? "PASS" : "FAIL", c.id, c.name, seconds_since(t0));
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    summary.push_back(line);
    if (!out.pass) ++failed;
  }
  std::printf("\n== summary\n");
  for (const auto& l : summary) std::printf("%s\n", l.c_str());
  return failed == 0 ? 0 : 1;
}
