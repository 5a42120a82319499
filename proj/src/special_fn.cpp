#include "rgg1d/special_fn.hpp"

#include "rgg1d/errors.hpp"
#include "rgg1d/series.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <string>

namespace rgg1d {

namespace {

const BigInt kZero{0};

std::mutex& row_mutex() {
    static std::mutex m;
    return m;
}

// Deque: references to existing rows stay valid while later rows are appended.
std::deque<StirlingRow>& row_cache() {
    static std::deque<StirlingRow> rows;
    return rows;
}

long double to_long_double(const BigInt& v) { return v.convert_to<long double>(); }

}  // namespace

const BigInt& StirlingRow::operator[](unsigned k) const {
    return k < values.size() ? values[k] : kZero;
}

const StirlingRow& stirling_row(unsigned m) {
    if (m > kStirlingMaxOrder)
        throw CapacityError("Stirling numbers are supported for m <= " +
                            std::to_string(kStirlingMaxOrder) + ", requested m = " +
                            std::to_string(m));
    std::lock_guard lock(row_mutex());
    auto& rows = row_cache();
    if (rows.empty()) rows.push_back(StirlingRow{0, {BigInt{1}}});
    while (rows.size() <= m) {
        const StirlingRow& prev = rows.back();
        const unsigned mm = prev.m + 1;
        StirlingRow next{mm, std::vector<BigInt>(mm + 1)};
        // S(m, k) = k S(m-1, k) + S(m-1, k-1)
        for (unsigned k = 1; k <= mm; ++k) next.values[k] = k * prev[k] + prev[k - 1];
        rows.push_back(std::move(next));
    }
    return rows[m];
}

BigInt stirling2(unsigned m, unsigned k) { return stirling_row(m)[k]; }

double polylog_neg(unsigned m, double z) {
    if (!(z < 1.0)) throw DomainError("polylog_neg requires z < 1, got z = " + std::to_string(z));
    if (m == 0) return z / (1.0 - z);
    const StirlingRow& row = stirling_row(m + 1);
    const long double w = 1.0L / (1.0L - static_cast<long double>(z));
    CompensatedSum<long double> acc;
    BigInt factorial{1};
    long double w_pow = w;
    for (unsigned k = 0; k <= m; ++k) {
        if (k > 0) factorial *= k;
        const long double coeff = to_long_double(factorial * row[k + 1]);
        const long double sign = ((m + k) % 2 == 0) ? 1.0L : -1.0L;
        acc.add(sign * coeff * w_pow);
        w_pow *= w;
    }
    return static_cast<double>(acc.value());
}

double partial_exp_sum(unsigned j_max, double y) {
    CompensatedSum<double> acc;
    double term = 1.0;
    acc.add(term);
    for (unsigned j = 1; j <= j_max; ++j) {
        term *= y / static_cast<double>(j);
        acc.add(term);
    }
    return acc.value();
}

}  // namespace rgg1d
