#include "rgg1d/series.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <vector>

namespace rgg1d {

namespace {

enum class Form { value, derivative, integral };

// sum_{i=0}^{K-n} (-1)^i / (n! i!) * g_form(j, d), j = n+i, d = max(x - jε, 0):
//   value:      (d a)^j
//   derivative: j a (d a)^{j-1}
//   integral:   (d a)^{j+1} / (a (j+1))
CompensatedSum<long double> lattice_sum(const ModelParams& params, double x, unsigned n, Form form) {
    CompensatedSum<long double> acc;
    const long K = lattice_floor(x, params.epsilon);
    if (K < static_cast<long>(n)) return acc;

    const long double eps = params.epsilon;
    const long double lam = params.lambda;
    const long double a = lam * std::exp(-lam * eps);
    const long double log_a = std::log(a);
    const long double xl = x;
    const long double log_xa = std::log(xl * a);
    const long double log_nfact = std::lgamma(static_cast<long double>(n) + 1.0L);
    const long double growth = xl * a;

    for (long i = 0; i <= K - static_cast<long>(n); ++i) {
        const unsigned long j = n + static_cast<unsigned long>(i);
        const long double d = std::max(0.0L, xl - static_cast<long double>(j) * eps);
        const long double log_coeff = -log_nfact - std::lgamma(static_cast<long double>(i) + 1.0L);
        const long double sign = (i % 2 == 0) ? 1.0L : -1.0L;
        const long double jl = static_cast<long double>(j);

        long double magnitude = 0.0L;
        long double bound_log = 0.0L;  // log of the same term with d replaced by x
        switch (form) {
        case Form::value:
            if (j == 0)
                magnitude = std::exp(log_coeff);
            else if (d > 0.0L)
                magnitude = std::exp(log_coeff + jl * std::log(d * a));
            bound_log = log_coeff + jl * log_xa;
            break;
        case Form::derivative:
            if (j == 1)
                magnitude = std::exp(log_coeff + log_a);
            else if (j > 1 && d > 0.0L)
                magnitude = std::exp(log_coeff + std::log(jl) + log_a + (jl - 1.0L) * std::log(d * a));
            bound_log = j == 0 ? -INFINITY
                               : log_coeff + std::log(jl) + log_a + (jl - 1.0L) * log_xa;
            break;
        case Form::integral:
            if (d > 0.0L)
                magnitude = std::exp(log_coeff + (jl + 1.0L) * std::log(d * a) - log_a -
                                     std::log(jl + 1.0L));
            bound_log = log_coeff + (jl + 1.0L) * log_xa - log_a - std::log(jl + 1.0L);
            break;
        }
        acc.add(sign * magnitude);

        // Past i ~ 4xa successive bounds shrink at least geometrically by 1/2.
        if (static_cast<long double>(i) > 4.0L * growth + 4.0L &&
            bound_log < std::log(1e-25L * std::max(acc.abs_sum(), 1e-300L)))
            break;
    }
    return acc;
}

struct Propagated {
    long double value{0};
    long double derivative{0};
    long double integral{0};
    long double abs_error{0};
};

// Second route, used when the alternating sum cancels too much (large x a).
// p_n solves p_n'(x) = a (p_{n-1}(x-ε) - p_n(x-ε)), p_{-1} = 0, with p_0 = 1 and
// p_n = 0 (n >= 1) on [0, ε). On cell k, p_n(kε + uε) = sum_j c_j u^j; one cell
// is the integral of the previous one. Coefficients shrink like (aε)^j/j! and
// aε <= 1/e, so truncating at kMaxDegree loses nothing and no step cancels.
std::vector<Propagated> propagate_all(const ModelParams& params, double x, unsigned n) {
    constexpr std::size_t kMaxDegree = 40;
    const long K = std::max(0L, lattice_floor(x, params.epsilon));
    const long double eps = params.epsilon;
    const long double ae = static_cast<long double>(params.lambda) * std::exp(-static_cast<long double>(params.lambda) * eps) * eps;

    using Poly = std::vector<long double>;
    std::vector<Poly> cell(n + 1, Poly{0.0L});
    cell[0][0] = 1.0L;
    std::vector<long double> done_integral(n + 1, 0.0L);

    auto eval = [](const Poly& c, long double u) {
        long double v = 0;
        for (std::size_t j = c.size(); j-- > 0;) v = v * u + c[j];
        return v;
    };
    auto cell_integral = [](const Poly& c, long double u) {
        long double v = 0;
        for (std::size_t j = c.size(); j-- > 0;) v = v * u + c[j] / static_cast<long double>(j + 1);
        return v * u;
    };

    for (long k = 1; k <= K; ++k) {
        std::vector<Poly> next(n + 1);
        for (unsigned m = 0; m <= n; ++m) {
            done_integral[m] += eps * cell_integral(cell[m], 1.0L);
            const Poly& own = cell[m];
            const Poly* lower = m > 0 ? &cell[m - 1] : nullptr;
            const std::size_t deg = std::min(kMaxDegree, std::max(own.size(), lower ? lower->size() : 0));
            Poly c(deg + 1, 0.0L);
            c[0] = eval(own, 1.0L);
            for (std::size_t j = 0; j < deg; ++j) {
                const long double d = (lower && j < lower->size() ? (*lower)[j] : 0.0L) - (j < own.size() ? own[j] : 0.0L);
                c[j + 1] = ae * d / static_cast<long double>(j + 1);
            }
            next[m] = std::move(c);
        }
        cell = std::move(next);
    }

    const long double u = static_cast<long double>(x) / eps - static_cast<long double>(K);
    std::vector<Propagated> all(n + 1);
    for (unsigned m = 0; m <= n; ++m) {
        const Poly& c = cell[m];
        Propagated& out = all[m];
        out.value = eval(c, u);
        for (std::size_t j = c.size(); j-- > 1;) out.derivative = out.derivative * u + static_cast<long double>(j) * c[j];
        out.derivative /= eps;
        out.integral = done_integral[m] + eps * cell_integral(c, u);
        out.abs_error = 8.0L * static_cast<long double>(K + 1) * LDBL_EPSILON;
    }
    return all;
}

Propagated propagate(const ModelParams& params, double x, unsigned n) { return propagate_all(params, x, n)[n]; }

double relative_error(long double abs_error, long double v) {
    return static_cast<double>(abs_error / std::max<long double>(std::abs(v), 1e-300L));
}

// The direct sum's rounding error is about LDBL_EPSILON * sum|term|; the
// propagated one about `scale` * (K+1) * LDBL_EPSILON. Pick the smaller.
bool prefer_propagation(const CompensatedSum<long double>& direct, const ModelParams& params, double x,
                        long double scale) {
    const long K = std::max(0L, lattice_floor(x, params.epsilon));
    return direct.abs_sum() > 8.0L * scale * static_cast<long double>(K + 1);
}

}  // namespace

SeriesValue count_prob(const ModelParams& params, double x, unsigned n) {
    if (x < 0.0) return {0.0, 0.0};
    const auto direct = lattice_sum(params, x, n, Form::value);
    if (!prefer_propagation(direct, params, x, 1.0L)) return direct.finish();
    const Propagated p = propagate(params, x, n);
    return {static_cast<double>(p.value), relative_error(p.abs_error, p.value)};
}

std::vector<SeriesValue> count_prob_row(const ModelParams& params, double x, unsigned n_max) {
    std::vector<SeriesValue> row(n_max + 1);
    if (x < 0.0) return row;
    std::vector<Propagated> fallback;
    for (unsigned n = 0; n <= n_max; ++n) {
        const auto direct = lattice_sum(params, x, n, Form::value);
        if (!prefer_propagation(direct, params, x, 1.0L)) {
            row[n] = direct.finish();
            continue;
        }
        if (fallback.empty()) fallback = propagate_all(params, x, n_max);
        row[n] = {static_cast<double>(fallback[n].value), relative_error(fallback[n].abs_error, fallback[n].value)};
    }
    return row;
}

double count_prob_derivative(const ModelParams& params, double x, unsigned n) {
    if (x < 0.0) return 0.0;
    const auto direct = lattice_sum(params, x, n, Form::derivative);
    if (!prefer_propagation(direct, params, x, 1.0L / params.epsilon)) return static_cast<double>(direct.value());
    return static_cast<double>(propagate(params, x, n).derivative);
}

double count_prob_integral(const ModelParams& params, double x, unsigned n) {
    if (x <= 0.0) return 0.0;
    const auto direct = lattice_sum(params, x, n, Form::integral);
    if (!prefer_propagation(direct, params, x, params.epsilon * (lattice_floor(x, params.epsilon) + 1.0)))
        return static_cast<double>(direct.value());
    return static_cast<double>(propagate(params, x, n).integral);
}

}  // namespace rgg1d
