#pragma once

#include <stdexcept>
#include <string>

namespace cure {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario text. `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A value violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Degenerate numerics (singular systems, non-finite moments).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace cure
