#include "freqstab/errors.hpp"

namespace freqstab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::InsufficientSamples: return "insufficient-samples";
    case ErrorCode::NoOnsetFound: return "no-onset-found";
    case ErrorCode::AmbiguousClassification: return "ambiguous-classification";
    case ErrorCode::NoCrossing: return "no-crossing";
    case ErrorCode::NoConvergence: return "no-convergence";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::UnstableIntegration: return "unstable-integration";
    case ErrorCode::DegenerateWeights: return "degenerate-weights";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::SchemaError: return "schema-error";
  }
  return "unknown";
}

}  // namespace freqstab
