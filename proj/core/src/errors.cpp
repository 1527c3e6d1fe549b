#include "cvf/errors.hpp"

namespace cvf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::MapNotInvertible: return "MapNotInvertible";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::PositivityLost: return "PositivityLost";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::OutOfWindow: return "OutOfWindow";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace cvf
