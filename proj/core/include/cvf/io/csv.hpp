/// @file csv.hpp
/// @brief Diagnostics CSV: one header row, then one row per record, values
/// printed with 17 significant digits so parsing recovers them exactly.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cvf/diagnostics.hpp"

namespace cvf {

/// Column names in output order.
const std::vector<std::string>& diagnostics_columns();

std::string format_csv_header();
std::string format_csv_row(const DiagnosticsRecord& r);

/// Throws IoError naming the path.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& records);

/// Throws FormatError on a wrong header, a short row or an unparsable value.
std::vector<DiagnosticsRecord> parse_diagnostics_csv(std::string_view text);

}  // namespace cvf
