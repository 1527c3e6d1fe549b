/// @file errors.hpp
/// @brief Error codes and the exception type thrown by every cvf module.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cvf {

enum class ErrorCode {
  InvalidGrid,
  InvalidParams,
  NonPositiveDensity,
  MapNotInvertible,
  CflViolation,
  PositivityLost,
  InsufficientHistory,
  NonConvergence,
  SingularSystem,
  OutOfWindow,
  ConfigError,
  FormatError,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Time-step index at which a run failed, if the error came out of run().
  std::optional<long> step() const noexcept { return step_; }

  Error with_step(long step) const {
    Error copy(code_, std::string(what()) + " (at step " + std::to_string(step) + ")", true);
    copy.step_ = step;
    return copy;
  }

 private:
  Error(ErrorCode code, const std::string& full_message, bool)
      : std::runtime_error(full_message), code_(code) {}

  ErrorCode code_;
  std::optional<long> step_;
};

}  // namespace cvf
