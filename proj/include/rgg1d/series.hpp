#pragma once

// Alternating sums behind every closed form in the library. All of them expand
// a probability in powers of λe^{-λε}; the terms grow like (λx)^k/k! before
// cancelling, so evaluation happens in long double with a compensated
// accumulator that also tracks sum |term| for a cancellation estimate.

#include "rgg1d/model.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace rgg1d {

/// Relative cancellation estimate above which a result carries a precision warning.
inline constexpr double kCancellationTolerance = 1e-9;

/// A value produced by an alternating sum together with its cancellation estimate
/// eps * sum|term| / max(|value|, 1e-300).
struct SeriesValue {
    double value{0.0};
    double cancellation{0.0};

    [[nodiscard]] bool precision_warning() const { return cancellation > kCancellationTolerance; }
};

/// Neumaier summation; also accumulates sum |x| for cancellation bookkeeping.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        abs_ += std::abs(x);
    }
    [[nodiscard]] T value() const { return sum_ + comp_; }
    [[nodiscard]] T abs_sum() const { return abs_; }

    [[nodiscard]] SeriesValue finish() const {
        const T v = value();
        const T denom = std::max<T>(std::abs(v), T(1e-300));
        return {static_cast<double>(v),
                static_cast<double>(std::numeric_limits<T>::epsilon() * abs_ / denom)};
    }

private:
    T sum_{0};
    T comp_{0};
    T abs_{0};
};

/// p_n(x) = Pr(β0(x) = n): probability of exactly n complete clusters in [0, x].
///   p_n(x) = (1/n!) sum_{i=0}^{⌊x/ε⌋-n} (-1)^i/i! ((x-(n+i)ε) λe^{-λε})^{n+i}
/// Zero for x < 0. Not clamped. When the alternating sum would lose more than
/// cell-by-cell propagation of p_n'(x) = a (p_{n-1}(x-ε) - p_n(x-ε)) (large x a),
/// the propagated value is returned instead; its error is absolute, ~K * 1e-18.
SeriesValue count_prob(const ModelParams& params, double x, unsigned n);

/// count_prob for n = 0..n_max at one x, sharing work between orders.
std::vector<SeriesValue> count_prob_row(const ModelParams& params, double x, unsigned n_max);

/// d/dx p_n(x), term by term (right derivative at lattice points).
double count_prob_derivative(const ModelParams& params, double x, unsigned n);

/// ∫_0^x p_n(y) dy, term by term.
double count_prob_integral(const ModelParams& params, double x, unsigned n);

/// Clamp a probability to [0, 1].
inline double clamp_probability(double p) { return std::min(1.0, std::max(0.0, p)); }

}  // namespace rgg1d
