#pragma once

#include <stdexcept>
#include <string>

namespace bvlab {

/// Categories of failure raised by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
    UnsupportedDimension,
    RefinementDirection,
    DimensionMismatch,
    Resource,
    Domain,
    Index,
    SupportViolation,
    Representability,
    Usage,
    NonConvergentSubsequence,
    Config,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace bvlab
