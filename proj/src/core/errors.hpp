#pragma once

#include <stdexcept>
#include <string>

namespace permsync {

/// Coarse failure taxonomy. The C API and the command line tool map these
/// onto status codes and exit codes, so new kinds should be added sparingly.
enum class ErrorKind {
    InvalidArgument,  // caller broke a documented precondition
    Parse,            // malformed input text
    Validation,       // well-formed input that violates matching semantics
    Solver,           // numerical failure (non-convergence, overflow)
    Io,               // file could not be read or written
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace permsync
