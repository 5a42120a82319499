#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace rgg1d {

using BigInt = boost::multiprecision::cpp_int;

/// Largest set size m for which Stirling numbers are served.
inline constexpr unsigned kStirlingMaxOrder = 64;

/// One row {m k}, k = 0..m, of Stirling numbers of the second kind.
struct StirlingRow {
    unsigned m{0};
    std::vector<BigInt> values;

    /// Zero for k > m.
    [[nodiscard]] const BigInt& operator[](unsigned k) const;
};

/// Row m of the triangle; rows are built once and shared (lock-protected cache).
/// Throws CapacityError for m > kStirlingMaxOrder.
const StirlingRow& stirling_row(unsigned m);

/// S(m, k), exact.
BigInt stirling2(unsigned m, unsigned k);

/// Li_{-m}(z) for z < 1 via the finite Stirling identity
///   Li_{-m}(z) = sum_{k=0}^{m} (-1)^{m+k} k! S(m+1, k+1) / (1-z)^{k+1}.
/// Integer coefficients stay exact until the final multiply.
double polylog_neg(unsigned m, double z);

/// sum_{j=0}^{j_max} y^j / j!, ascending with compensated summation.
double partial_exp_sum(unsigned j_max, double y);

}  // namespace rgg1d
