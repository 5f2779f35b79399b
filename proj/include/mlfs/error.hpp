#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlfs {

enum class ErrorCode {
    argument,
    parse,
    config,
    data,
    state,
    io,
    empty_after_pruning,
    undefined_metric,
    internal,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library. The code survives the trip through the
// C API, the message is what mlfs_last_error() reports.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(ErrorCode::parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
    if (!condition) {
        throw Error(code, message);
    }
}

}  // namespace mlfs
