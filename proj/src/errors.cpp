#include "cogrates/errors.hpp"

namespace cogrates {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeArgument: return "NegativeArgument";
    case ErrorCode::ZeroGain: return "ZeroGain";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::WeakInterference: return "WeakInterference";
    case ErrorCode::StrongInterference: return "StrongInterference";
    case ErrorCode::ParameterRegime: return "ParameterRegime";
    case ErrorCode::RegimeBoundary: return "RegimeBoundary";
    case ErrorCode::NonpositiveLogArgument: return "NonpositiveLogArgument";
    case ErrorCode::InvalidEnvelope: return "InvalidEnvelope";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::InfeasibleSystem: return "InfeasibleSystem";
    case ErrorCode::UnboundedRegion: return "UnboundedRegion";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::InvalidPmf: return "InvalidPmf";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::MissingAuxiliary: return "MissingAuxiliary";
    case ErrorCode::SubstitutionInconsistent: return "SubstitutionInconsistent";
    case ErrorCode::NotDeterministic: return "NotDeterministic";
    case ErrorCode::UnknownSpec: return "UnknownSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_precondition_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

}  // namespace cogrates
