#pragma once

#include <stdexcept>
#include <string>

namespace locons {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses onto its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input: expressions, path specs, config documents.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what_msg)
        : Error(what_msg), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Well-formed input that violates a precondition or a checked invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A checked mathematical invariant does not hold (non-constant overlap
/// difference, broken cocycle identity, ...).
class InvariantError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Numerical breakdown: domain errors, singularity approach, refinement or
/// step-size guards.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Expression evaluated outside its domain (x/0, log of non-positive, ...).
class DomainError : public NumericError {
public:
    DomainError(const std::string& what_msg, std::string subexpr)
        : NumericError(what_msg), subexpr_(std::move(subexpr)) {}
    const std::string& subexpression() const noexcept { return subexpr_; }

private:
    std::string subexpr_;
};

class SingularityError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace locons
