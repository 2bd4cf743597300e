#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ngrq {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments: non-finite values, t <= 0, bad exponent ordering, ...
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A dilation would push the support of a radial function past the truncation radius.
class DomainOverflow : public Error {
public:
    using Error::Error;
};

// A scalar equation has no root in the admissible range.
class NoRoots : public Error {
public:
    using Error::Error;
};

// Two roots collapsed into a tangency (within the degenerate tolerance).
class Degenerate : public Error {
public:
    using Error::Error;
};

// A fibering projection onto the Nehari manifold does not exist for this function.
class ProjectionNonexistent : public Error {
public:
    using Error::Error;
};

// An operation was called outside its admissible parameter window.
class PreconditionViolated : public Error {
public:
    using Error::Error;
};

// No start of a multi-start solve produced a feasible iterate.
class Infeasible : public Error {
public:
    using Error::Error;
};

// A functional passed to the quotient minimizer is not 0-homogeneous.
class InvalidQuotient : public Error {
public:
    using Error::Error;
};

// Configuration validation failure; carries the offending field name.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace ngrq
