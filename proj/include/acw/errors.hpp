#pragma once

#include <stdexcept>
#include <string>

namespace acw {

enum class ErrorCode {
    ParseError,
    OverlappingEdits,
    TransformFailed,
    FixedPointNotReached,
    BadProbability,
    IoError,
    SchemaError,
    KeyError,
    InterpreterMissing,
    Internal,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::OverlappingEdits: return "OVERLAPPING_EDITS";
    case ErrorCode::TransformFailed: return "TRANSFORM_FAILED";
    case ErrorCode::FixedPointNotReached: return "FIXED_POINT_NOT_REACHED";
    case ErrorCode::BadProbability: return "BAD_PROBABILITY";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
    case ErrorCode::KeyError: return "KEY_ERROR";
    case ErrorCode::InterpreterMissing: return "INTERPRETER_MISSING";
    case ErrorCode::Internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace acw
