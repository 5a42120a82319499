#pragma once

#include <stdexcept>
#include <string>

namespace rgg1d {

/// Base of every error raised by the library. The CLI exits with 1 for these, 2 for DomainError.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameter value (non-positive intensity, z >= 1 for a polylog, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A request beyond a documented support bound.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Caller broke a precondition on its input data (unsorted points, empty sample).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Quadrature or root finding did not converge within its budget.
class NumericError : public Error {
public:
    NumericError(const std::string& what, double last_estimate)
        : Error(what), last_estimate_(last_estimate) {}
    [[nodiscard]] double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

/// A probability table that does not sum to one: the evaluation left its stable regime.
class NormalizationError : public Error {
public:
    NormalizationError(const std::string& what, double tail_mass)
        : Error(what), tail_mass_(tail_mass) {}
    [[nodiscard]] double tail_mass() const noexcept { return tail_mass_; }

private:
    double tail_mass_;
};

}  // namespace rgg1d
