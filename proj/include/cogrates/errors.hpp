#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cogrates {

enum class ErrorCode {
  NegativeArgument,
  ZeroGain,
  InvalidParameter,
  WeakInterference,
  StrongInterference,
  ParameterRegime,
  RegimeBoundary,
  NonpositiveLogArgument,
  InvalidEnvelope,
  InvalidSystem,
  InfeasibleSystem,
  UnboundedRegion,
  UnknownVariable,
  InvalidPmf,
  AlphabetMismatch,
  MissingAuxiliary,
  SubstitutionInconsistent,
  NotDeterministic,
  UnknownSpec,
  ParseError,
  IoError,
};

std::string_view error_name(ErrorCode code);

// Errors that come from the caller violating a documented precondition
// (as opposed to malformed input files or I/O failures).
bool is_precondition_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace cogrates
