#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsl {

/// Base class for all recoverable rslnet errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An edge connects two vertices of the same mode in a two-mode file.
class ModeViolation : public ParseError {
public:
    using ParseError::ParseError;
};

/// Operation received an empty distribution or sequence.
class EmptyInput : public Error {
public:
    using Error::Error;
};

/// Fewer tail observations than the minimum required for a tail fit.
class InsufficientTail : public Error {
public:
    using Error::Error;
};

/// An iterative fit exhausted its budget without meeting its tolerances.
class NonConvergence : public Error {
public:
    using Error::Error;
};

/// A materialized result would exceed the configured size cap.
class OutputTooLarge : public Error {
public:
    using Error::Error;
};

}  // namespace rsl
