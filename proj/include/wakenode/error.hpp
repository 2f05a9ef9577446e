#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wakenode {

/// Machine-parsable failure categories. The CLI prints these as
/// `error[<code>]: <message>` on stderr.
enum class ErrorCode {
    InvalidArgument,
    EmptyInput,
    RateMismatch,
    LengthMismatch,
    OutOfRange,
    Domain,
    TooShort,
    AlignmentFailed,
    Degenerate,
    NotConverged,
    Parse,
    Io,
    UnsupportedFormat,
    UnknownProfile,
    RateTooLow,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace wakenode
