#include "wakenode/error.hpp"

namespace wakenode {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "E_INVALID_ARGUMENT";
        case ErrorCode::EmptyInput: return "E_EMPTY_INPUT";
        case ErrorCode::RateMismatch: return "E_RATE_MISMATCH";
        case ErrorCode::LengthMismatch: return "E_LENGTH_MISMATCH";
        case ErrorCode::OutOfRange: return "E_OUT_OF_RANGE";
        case ErrorCode::Domain: return "E_DOMAIN";
        case ErrorCode::TooShort: return "E_TOO_SHORT";
        case ErrorCode::AlignmentFailed: return "E_ALIGNMENT_FAILED";
        case ErrorCode::Degenerate: return "E_DEGENERATE";
        case ErrorCode::NotConverged: return "E_NOT_CONVERGED";
        case ErrorCode::Parse: return "E_PARSE";
        case ErrorCode::Io: return "E_IO";
        case ErrorCode::UnsupportedFormat: return "E_UNSUPPORTED_FORMAT";
        case ErrorCode::UnknownProfile: return "E_UNKNOWN_PROFILE";
        case ErrorCode::RateTooLow: return "E_RATE_TOO_LOW";
    }
    return "E_UNKNOWN";
}

}  // namespace wakenode
