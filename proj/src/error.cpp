#include "gallai/error.hpp"

namespace gallai {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidCell: return "InvalidCell";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
    case ErrorCode::SolverCrash: return "SolverCrash";
    case ErrorCode::MalformedOutput: return "MalformedOutput";
    case ErrorCode::MissingExecutable: return "MissingExecutable";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::RowLengthMismatch: return "RowLengthMismatch";
    case ErrorCode::BadCharacter: return "BadCharacter";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::MixedGrids: return "MixedGrids";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace gallai
