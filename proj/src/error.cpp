#include "fqc/error.hpp"

namespace fqc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::SingularPotential: return "SingularPotential";
    case ErrorCode::InvalidEta: return "InvalidEta";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::MissingOmega: return "MissingOmega";
    case ErrorCode::HoppingZero: return "HoppingZero";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::BaseOnSpectrum: return "BaseOnSpectrum";
    case ErrorCode::NonIntegerWinding: return "NonIntegerWinding";
    case ErrorCode::ZeroVector: return "ZeroVector";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

}  // namespace fqc
