#include "pi_forge/error.hpp"

namespace pi_forge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidAssignment: return "invalid-assignment";
    case ErrorCode::InvalidQuery: return "invalid-query";
    case ErrorCode::ZeroEvidence: return "zero-evidence";
    case ErrorCode::InvalidSpec: return "invalid-spec";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::NonRealizable: return "non-realizable";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::InvalidCell: return "invalid-cell";
    case ErrorCode::Domain: return "domain-error";
    case ErrorCode::Io: return "io-error";
  }
  return "error";
}

}  // namespace pi_forge
