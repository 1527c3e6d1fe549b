#include "cvf/io/sinks.hpp"

#include <cstdio>

#include "cvf/errors.hpp"
#include "cvf/io/csv.hpp"
#include "cvf/io/snapshot.hpp"

namespace cvf {

CsvDiagnosticsSink::CsvDiagnosticsSink(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out_ << format_csv_header() << '\n';
  out_.flush();
}

void CsvDiagnosticsSink::write(const DiagnosticsRecord& record) {
  out_ << format_csv_row(record) << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::IoError, "write failed for " + path_.string());
}

DirectorySnapshotSink::DirectorySnapshotSink(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
}

void DirectorySnapshotSink::write(const FlowState& state, long step) {
  char name[32];
  std::snprintf(name, sizeof name, "snapshot_%06ld.cvef", step);
  write_snapshot(dir_ / name, state);
}

}  // namespace cvf
