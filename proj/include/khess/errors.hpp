#pragma once

#include <stdexcept>
#include <string>

namespace khess {

// Argument outside the mathematical domain of an operation (k out of range,
// r = 0 on a punctured-neighbourhood formula, non-symmetric matrix, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller violated a documented precondition (negative source, rate condition
// on a barrier, boundary not (k-1)-convex, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative procedure failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A search over a parameter range came up empty.
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical results contradict a structural property that must hold
// (non-monotone iterates, non-monotone bisection predicate).
class InconsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace khess
