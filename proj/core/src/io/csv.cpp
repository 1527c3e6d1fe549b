#include "cvf/io/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "cvf/errors.hpp"

namespace cvf {

namespace {

struct Column {
  const char* name;
  double DiagnosticsRecord::*field;
};

// picard_iters is an integer and handled separately.
const Column kColumns[] = {
    {"t", &DiagnosticsRecord::t},
    {"mass", &DiagnosticsRecord::mass},
    {"e_kin", &DiagnosticsRecord::e_kin},
    {"e_elastic_E", &DiagnosticsRecord::e_elastic_E},
    {"e_elastic_F", &DiagnosticsRecord::e_elastic_F},
    {"e_press", &DiagnosticsRecord::e_press},
    {"diss_rate", &DiagnosticsRecord::diss_rate},
    {"diss_cum", &DiagnosticsRecord::diss_cum},
    {"balance_res", &DiagnosticsRecord::balance_res},
    {"curl_linf", &DiagnosticsRecord::curl_linf},
    {"curl_l2", &DiagnosticsRecord::curl_l2},
    {"piola_l2", &DiagnosticsRecord::piola_l2},
    {"trace_int", &DiagnosticsRecord::trace_int},
    {"rho_min", &DiagnosticsRecord::rho_min},
    {"rho_max", &DiagnosticsRecord::rho_max},
    {"sigma_lq", &DiagnosticsRecord::sigma_lq},
    {"gradE_lq", &DiagnosticsRecord::gradE_lq},
    {"E_w1q", &DiagnosticsRecord::E_w1q},
    {"Z_l2", &DiagnosticsRecord::Z_l2},
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c;
    for (const auto& col : kColumns) c.emplace_back(col.name);
    c.emplace_back("picard_iters");
    c.emplace_back("picard_ratio_max");
    return c;
  }();
  return cols;
}

std::string format_csv_header() {
  std::string s;
  for (const auto& c : diagnostics_columns()) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s;
}

std::string format_csv_row(const DiagnosticsRecord& r) {
  std::string s;
  for (const auto& col : kColumns) {
    s += fmt(r.*col.field);
    s += ',';
  }
  s += std::to_string(r.picard_iters);
  s += ',';
  s += fmt(r.picard_ratio_max);
  return s;
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << format_csv_header() << '\n';
  for (const auto& r : records) out << format_csv_row(r) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<DiagnosticsRecord> parse_diagnostics_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = nl + 1;
  }
  if (lines.empty() || lines[0] != format_csv_header()) {
    throw Error(ErrorCode::FormatError, "diagnostics CSV header mismatch");
  }
  const std::size_t ncols = diagnostics_columns().size();
  std::vector<DiagnosticsRecord> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    std::vector<std::string_view> cells;
    std::size_t s = 0;
    const auto line = lines[li];
    for (;;) {
      const auto c = line.find(',', s);
      cells.push_back(line.substr(s, c == std::string_view::npos ? c : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (cells.size() != ncols) {
      throw Error(ErrorCode::FormatError, "row " + std::to_string(li) + " has " +
                                              std::to_string(cells.size()) + " cells, expected " +
                                              std::to_string(ncols));
    }
    auto bad = [&](std::size_t col) {
      return Error(ErrorCode::FormatError, "row " + std::to_string(li) + ", column " +
                                               diagnostics_columns()[col] + ": cannot parse '" +
                                               std::string(cells[col]) + "'");
    };
    DiagnosticsRecord r;
    std::size_t col = 0;
    for (const auto& c : kColumns) {
      const auto cell = cells[col];
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), r.*c.field);
      if (ec != std::errc() || p != cell.data() + cell.size()) throw bad(col);
      ++col;
    }
    {
      const auto cell = cells[col];
      const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), r.picard_iters);
      if (ec != std::errc() || p != cell.data() + cell.size()) throw bad(col);
      ++col;
    }
    const auto cell = cells[col];
    const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), r.picard_ratio_max);
    if (ec != std::errc() || p != cell.data() + cell.size()) throw bad(col);
    out.push_back(r);
  }
  return out;
}

}  // namespace cvf
