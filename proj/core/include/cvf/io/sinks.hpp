/// @file sinks.hpp
/// @brief Output interfaces fed by the run loop, with file and in-memory
/// implementations.
#pragma once

#include <filesystem>
#include <fstream>
#include <vector>

#include "cvf/diagnostics.hpp"
#include "cvf/state.hpp"

namespace cvf {

class DiagnosticsSink {
 public:
  virtual ~DiagnosticsSink() = default;
  virtual void write(const DiagnosticsRecord& record) = 0;
};

class SnapshotSink {
 public:
  virtual ~SnapshotSink() = default;
  virtual void write(const FlowState& state, long step) = 0;
};

/// Streams rows to a CSV file; the header is written on construction.
class CsvDiagnosticsSink final : public DiagnosticsSink {
 public:
  explicit CsvDiagnosticsSink(const std::filesystem::path& path);
  void write(const DiagnosticsRecord& record) override;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class MemoryDiagnosticsSink final : public DiagnosticsSink {
 public:
  void write(const DiagnosticsRecord& record) override { records.push_back(record); }
  std::vector<DiagnosticsRecord> records;
};

/// Writes snapshot_<step, 6 digits>.cvef into a directory.
class DirectorySnapshotSink final : public SnapshotSink {
 public:
  explicit DirectorySnapshotSink(std::filesystem::path dir);
  void write(const FlowState& state, long step) override;

 private:
  std::filesystem::path dir_;
};

class MemorySnapshotSink final : public SnapshotSink {
 public:
  void write(const FlowState& state, long step) override {
    states.push_back(state);
    steps.push_back(step);
  }
  std::vector<FlowState> states;
  std::vector<long> steps;
};

}  // namespace cvf
