#pragma once

#include "rgg1d/errors.hpp"

#include <cmath>
#include <string>

namespace rgg1d {

/// Poisson intensity (points per unit length) and connection radius.
struct ModelParams {
    double lambda{1.0};
    double epsilon{1.0};

    void validate() const {
        if (!(std::isfinite(lambda) && lambda > 0.0))
            throw DomainError("lambda must be finite and > 0, got " + std::to_string(lambda));
        if (!(std::isfinite(epsilon) && epsilon > 0.0))
            throw DomainError("epsilon must be finite and > 0, got " + std::to_string(epsilon));
    }

    /// λ e^{-λε}: the weight that every closed form is a polynomial in.
    [[nodiscard]] double cluster_weight() const { return lambda * std::exp(-lambda * epsilon); }
};

/// The process observed on [0, length] (or on a circle of that circumference).
struct IntervalModel {
    ModelParams params;
    double length{1.0};

    void validate() const {
        params.validate();
        if (!(std::isfinite(length) && length > 0.0))
            throw DomainError("length must be finite and > 0, got " + std::to_string(length));
    }
};

/// floor(x/ε) with a 1e-12 guard against flicker at exact multiples; -1 for x < 0.
inline long lattice_floor(double x, double epsilon) {
    if (x < 0.0) return -1;
    return static_cast<long>(std::floor(x / epsilon + 1e-12));
}

}  // namespace rgg1d
