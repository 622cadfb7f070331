#pragma once

#include <stdexcept>
#include <string>

namespace splab {

// Argument outside the mathematical domain of an operation (x < 0 for
// Bessel, |u| beyond the injectivity radius, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// A request that would exceed the enumeration budget (window too high,
// bounding box too large).
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed configuration or inconsistent parameters.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Input that cannot support the requested computation (too few samples
// for a fit, an empty probe grid, an empty window for sampling).
class DegenerateInputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Derivative order beyond what the kernels support.
class OrderError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A numerical self-check failed: energy drift along a geodesic, an
// imaginary residue in a kernel that must be real.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace splab
