#pragma once

#include <stdexcept>
#include <string>

namespace polariton {

/// Invalid physical input: non-positive frequency, empty point set, bad grid.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dynamical matrix has complex eigenvalues (energy form not positive definite).
class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine failed to converge or bracket a root.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition on an otherwise well-typed value.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace polariton
