#include "tensornorm/error.hpp"

namespace tensornorm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ShapeMismatch: return "shape_mismatch";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::IndexOutOfRange: return "index_out_of_range";
    case ErrorCode::DuplicateIndex: return "duplicate_index";
    case ErrorCode::NonFinite: return "non_finite";
    case ErrorCode::ZeroPart: return "zero_part";
    case ErrorCode::ZeroTensor: return "zero_tensor";
    case ErrorCode::NegativeEntry: return "negative_entry";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::NotWeaklyIrreducible: return "not_weakly_irreducible";
    case ErrorCode::ConditionViolated: return "condition_violated";
    case ErrorCode::NumericalBreakdown: return "numerical_breakdown";
    case ErrorCode::NotPartiallySymmetric: return "not_partially_symmetric";
    case ErrorCode::DimensionGuard: return "dimension_guard";
    case ErrorCode::DegenerateGradient: return "degenerate_gradient";
    case ErrorCode::ResidualTooLarge: return "residual_too_large";
    case ErrorCode::TraceTooShort: return "trace_too_short";
  }
  return "unknown";
}

}  // namespace tensornorm
