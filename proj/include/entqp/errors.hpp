#pragma once

#include <stdexcept>
#include <string>

namespace entqp {

// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A scalar argument lies outside its mathematical domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

// An object violates a structural invariant (asymmetry, bad trace, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed input text. row/col are 1-based; for CSV, col counts fields.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long row, long col)
        : Error(what + " (row " + std::to_string(row) + ", column " + std::to_string(col) + ")"),
          row_(row), col_(col) {}

    long row() const noexcept { return row_; }
    long col() const noexcept { return col_; }

private:
    long row_;
    long col_;
};

// Mismatched sizes between objects that must agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

// The request would exceed a configured cap.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

// An internal consistency check failed; indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

// The sigma = 0 phase distribution is a point mass and has no density.
class DegenerateDeltaError : public Error {
public:
    using Error::Error;
};

} // namespace entqp
