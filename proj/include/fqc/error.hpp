#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fqc {

enum class ErrorCode {
  InvalidParameter,
  SingularPotential,
  InvalidEta,
  NoConvergence,
  SingularMatrix,
  StepTooLarge,
  UnsupportedModel,
  MissingOmega,
  HoppingZero,
  BranchCut,
  BaseOnSpectrum,
  NonIntegerWinding,
  ZeroVector,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. what() starts with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);
  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace fqc
