#pragma once

#include <stdexcept>
#include <string>

namespace dkap {

// Precondition violated by the caller (n = 0, gcd(a, q) != 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Exact integer arithmetic left the 128-bit range.
class ArithmeticError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Request exceeds a configured memory budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A floating-point result failed its own consistency check.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fewer usable data points than a fit requires.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dkap
