#pragma once

#include <stdexcept>
#include <string>

namespace advecta {

enum class ErrorKind {
    SyntaxError,         // malformed expression text
    EvalError,           // expression domain violation or non-finite result
    SchemaError,         // scenario JSON fails validation
    NegativeAdvance,     // advance function sampled below zero
    SingularMatrix,      // pivot below tolerance or unusable inverse
    Overflow,            // fundamental matrix norm blew past the guard
    OutOfDomain,         // query outside the computed grid
    OffGrid,             // query not resolvable to a grid point
    NotDecaying,         // exponential fit on a non-decaying transition family
    DegenerateWindow,    // too few usable samples for a decay fit
    InvalidCertificate,  // certificate arithmetic given out-of-range inputs
    InvalidArgument,     // bad horizon or other caller error
    IoError,             // file read/write failure
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception carrying a machine-checkable kind next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::SyntaxError: return "syntax error";
        case ErrorKind::EvalError: return "eval error";
        case ErrorKind::SchemaError: return "schema error";
        case ErrorKind::NegativeAdvance: return "negative advance";
        case ErrorKind::SingularMatrix: return "singular matrix";
        case ErrorKind::Overflow: return "overflow";
        case ErrorKind::OutOfDomain: return "out of domain";
        case ErrorKind::OffGrid: return "off grid";
        case ErrorKind::NotDecaying: return "not decaying";
        case ErrorKind::DegenerateWindow: return "degenerate window";
        case ErrorKind::InvalidCertificate: return "invalid certificate";
        case ErrorKind::InvalidArgument: return "invalid argument";
        case ErrorKind::IoError: return "io error";
    }
    return "error";
}

}  // namespace advecta
