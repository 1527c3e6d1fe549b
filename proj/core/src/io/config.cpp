#include "cvf/io/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "cvf/errors.hpp"

namespace cvf {

namespace {

[[noreturn]] void fail(std::string_view key, const std::string& msg) {
  throw Error(ErrorCode::ConfigError, std::string(key) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end) {
    fail(key, "expected a number, got '" + std::string(v) + "'");
  }
  if (!std::isfinite(x)) fail(key, "value must be finite");
  return x;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int x = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end) {
    fail(key, "expected an integer, got '" + std::string(v) + "'");
  }
  return x;
}

template <typename T, typename Parse>
std::array<T, 3> parse_triple(std::string_view key, std::string_view v, Parse&& parse) {
  const auto parts = split(v, ',');
  if (parts.size() == 1) {
    const T x = parse(key, parts[0]);
    return {x, x, x};
  }
  if (parts.size() != 3) fail(key, "expected one value or three comma-separated values");
  return {parse(key, parts[0]), parse(key, parts[1]), parse(key, parts[2])};
}

std::vector<std::array<int, 3>> parse_modes(std::string_view key, std::string_view v) {
  std::vector<std::array<int, 3>> modes;
  if (v.empty()) return modes;
  for (auto item : split(v, ';')) {
    const auto parts = split(item, ',');
    if (parts.size() != 3) fail(key, "each mode needs three integers, got '" + std::string(item) + "'");
    modes.push_back({parse_int<int>(key, parts[0]), parse_int<int>(key, parts[1]),
                     parse_int<int>(key, parts[2])});
  }
  return modes;
}

using Setter = std::function<void(Config&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"grid.n", [](Config& c, auto k, auto v) { c.grid_n = parse_triple<int>(k, v, parse_int<int>); }},
      {"grid.length",
       [](Config& c, auto k, auto v) { c.grid_length = parse_triple<double>(k, v, parse_double); }},
      {"params.mu", [](Config& c, auto k, auto v) { c.params.mu = parse_double(k, v); }},
      {"params.lambda", [](Config& c, auto k, auto v) { c.params.lambda = parse_double(k, v); }},
      {"params.gamma", [](Config& c, auto k, auto v) { c.params.gamma = parse_double(k, v); }},
      {"params.nu", [](Config& c, auto k, auto v) { c.params.nu = parse_double(k, v); }},
      {"ic.amplitude", [](Config& c, auto k, auto v) { c.ic.amplitude = parse_double(k, v); }},
      {"ic.modes", [](Config& c, auto k, auto v) { c.ic.modes = parse_modes(k, v); }},
      {"ic.seed", [](Config& c, auto k, auto v) { c.ic.seed = parse_int<std::uint64_t>(k, v); }},
      {"ic.velocity_amplitude",
       [](Config& c, auto k, auto v) { c.ic.velocity_amplitude = parse_double(k, v); }},
      {"time.dt", [](Config& c, auto k, auto v) { c.dt = parse_double(k, v); }},
      {"time.t_end", [](Config& c, auto k, auto v) { c.t_end = parse_double(k, v); }},
      {"picard.tol", [](Config& c, auto k, auto v) { c.picard_tol = parse_double(k, v); }},
      {"picard.max_iter",
       [](Config& c, auto k, auto v) { c.picard_max_iter = parse_int<int>(k, v); }},
      {"output.stride", [](Config& c, auto k, auto v) { c.output_stride = parse_int<long>(k, v); }},
      {"output.dir",
       [](Config& c, auto k, auto v) {
         if (v.empty()) fail(k, "must not be empty");
         c.output_dir = std::string(v);
       }},
      {"norms.q", [](Config& c, auto k, auto v) { c.norms_q = parse_double(k, v); }},
  };
  return table;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void validate_config(const Config& c) {
  for (int a = 0; a < 3; ++a) {
    if (c.grid_n[a] < 4 || c.grid_n[a] % 2 != 0) fail("grid.n", "each N must be even and >= 4");
    if (c.grid_n[a] > 1024) fail("grid.n", "each N must be <= 1024");
    if (!(c.grid_length[a] > 0.0)) fail("grid.length", "lengths must be positive");
  }
  try {
    (void)c.grid();
  } catch (const Error& e) {
    fail("grid.length", e.what());
  }
  if (!(c.params.mu > 0.0)) fail("params.mu", "must be > 0");
  if (!(2.0 * c.params.mu + 3.0 * c.params.lambda > 0.0)) {
    fail("params.lambda", "must satisfy 2*mu + 3*lambda > 0");
  }
  if (!(c.params.gamma > 1.0)) fail("params.gamma", "must be > 1");
  if (!(c.params.nu >= 1.0)) fail("params.nu", "must be >= 1");
  if (!(c.ic.amplitude >= 0.0)) fail("ic.amplitude", "must be >= 0");
  if (c.ic.amplitude > 0.0 && c.ic.modes.empty()) {
    fail("ic.modes", "must be nonempty when ic.amplitude > 0");
  }
  for (const auto& m : c.ic.modes) {
    if (m[0] == 0 && m[1] == 0 && m[2] == 0) fail("ic.modes", "zero wavevector is not allowed");
    for (int a = 0; a < 3; ++a) {
      if (std::abs(static_cast<long>(m[a])) >= c.grid_n[a] / 2) {
        fail("ic.modes", "mode component exceeds the resolvable range |m| < N/2");
      }
    }
  }
  if (!(c.ic.velocity_amplitude >= 0.0)) fail("ic.velocity_amplitude", "must be >= 0");
  if (!(c.dt > 0.0)) fail("time.dt", "must be > 0");
  if (!(c.t_end >= 0.0)) fail("time.t_end", "must be >= 0");
  if (c.t_end / c.dt > 1e8) fail("time.t_end", "t_end / dt exceeds the step budget");
  if (!(c.picard_tol > 0.0)) fail("picard.tol", "must be > 0");
  if (c.picard_max_iter < 1) fail("picard.max_iter", "must be >= 1");
  if (c.output_stride < 1) fail("output.stride", "must be >= 1");
  if (c.output_dir.empty()) fail("output.dir", "must not be empty");
  if (!(c.norms_q > 3.0)) fail("norms.q", "must be > 3");
}

Config parse_config(std::string_view text) {
  Config cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError,
                  "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) fail(key.empty() ? "<empty>" : key, "unknown key");
    if (!seen.emplace(key).second) fail(key, "duplicate key");
    it->second(cfg, key, value);
  }
  validate_config(cfg);
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const Config& c) {
  std::ostringstream o;
  o << "grid.n = " << c.grid_n[0] << ',' << c.grid_n[1] << ',' << c.grid_n[2] << '\n';
  o << "grid.length = " << fmt(c.grid_length[0]) << ',' << fmt(c.grid_length[1]) << ','
    << fmt(c.grid_length[2]) << '\n';
  o << "params.mu = " << fmt(c.params.mu) << '\n';
  o << "params.lambda = " << fmt(c.params.lambda) << '\n';
  o << "params.gamma = " << fmt(c.params.gamma) << '\n';
  o << "params.nu = " << fmt(c.params.nu) << '\n';
  o << "ic.amplitude = " << fmt(c.ic.amplitude) << '\n';
  o << "ic.modes = ";
  for (std::size_t i = 0; i < c.ic.modes.size(); ++i) {
    const auto& m = c.ic.modes[i];
    o << (i ? ";" : "") << m[0] << ',' << m[1] << ',' << m[2];
  }
  o << '\n';
  o << "ic.seed = " << c.ic.seed << '\n';
  o << "ic.velocity_amplitude = " << fmt(c.ic.velocity_amplitude) << '\n';
  o << "time.dt = " << fmt(c.dt) << '\n';
  o << "time.t_end = " << fmt(c.t_end) << '\n';
  o << "picard.tol = " << fmt(c.picard_tol) << '\n';
  o << "picard.max_iter = " << c.picard_max_iter << '\n';
  o << "output.stride = " << c.output_stride << '\n';
  o << "output.dir = " << c.output_dir << '\n';
  o << "norms.q = " << fmt(c.norms_q) << '\n';
  return o.str();
}

RunConfig Config::run_config() const {
  RunConfig r;
  r.dt = dt;
  r.t_end = t_end;
  r.output_stride = output_stride;
  r.step.picard.tol = picard_tol;
  r.step.picard.max_iter = picard_max_iter;
  r.norms.q = norms_q;
  return r;
}

}  // namespace cvf
