#include "rgg1d/component_counts.hpp"

#include "rgg1d/cluster_laws.hpp"
#include "rgg1d/quadrature.hpp"
#include "rgg1d/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rgg1d {

namespace {

SeriesValue clamped(SeriesValue v) {
    v.value = clamp_probability(v.value);
    return v;
}

template <class Pmf>
DistributionTable build_table(const IntervalModel& model, unsigned support_max, const char* what, Pmf pmf) {
    DistributionTable table;
    table.support_max = support_max;
    table.probs.reserve(support_max + 1);
    CompensatedSum<double> total;
    for (unsigned n = 0; n <= support_max; ++n) {
        const SeriesValue v = pmf(model, n);
        table.probs.push_back(v.value);
        table.max_cancellation = std::max(table.max_cancellation, v.cancellation);
        total.add(v.value);
    }
    table.tail_mass = 1.0 - total.value();
    if (std::abs(table.tail_mass) > 1e-9)
        throw NormalizationError(std::string(what) + " table does not normalize: tail mass " +
                                     std::to_string(table.tail_mass) + " (lambda=" +
                                     std::to_string(model.params.lambda) + ", epsilon=" +
                                     std::to_string(model.params.epsilon) + ", length=" +
                                     std::to_string(model.length) + ")",
                                 table.tail_mass);
    return table;
}

unsigned support_bound(const IntervalModel& model) {
    return static_cast<unsigned>(std::max(0L, lattice_floor(model.length, model.params.epsilon)));
}

// C(i, n) for i = n, n+1, ... as long double.
struct BinomialColumn {
    unsigned n;
    unsigned i;
    long double value{1.0L};
    void advance() {
        ++i;
        value = value * static_cast<long double>(i) / static_cast<long double>(i - n);
    }
};

}  // namespace

SeriesValue pmf_beta0(const IntervalModel& model, unsigned n) {
    model.validate();
    return clamped(count_prob(model.params, model.length, n));
}

DistributionTable pmf_beta0_table(const IntervalModel& model) {
    model.validate();
    const auto row = count_prob_row(model.params, model.length, support_bound(model));
    return build_table(model, support_bound(model), "complete-cluster",
                       [&row](const IntervalModel&, unsigned n) { return clamped(row[n]); });
}

double moment_beta0(const IntervalModel& model, unsigned m) {
    model.validate();
    if (m == 0) throw DomainError("moment order must be >= 1");
    const StirlingRow& row = stirling_row(m);
    const long double eps = model.params.epsilon;
    const long double a = model.params.cluster_weight();
    const long double L = model.length;
    CompensatedSum<long double> acc;
    for (unsigned k = 1; k <= m; ++k) {
        const long double gap = L - k * eps;
        if (!(gap > 0.0L)) break;
        acc.add(row[k].convert_to<long double>() * std::pow(gap * a, static_cast<long double>(k)));
    }
    return static_cast<double>(acc.value());
}

double mean_beta0(const IntervalModel& model) {
    model.validate();
    const double eps = model.params.epsilon;
    if (!(model.length > eps)) return 0.0;
    return (model.length - eps) * model.params.cluster_weight();
}

double var_beta0(const IntervalModel& model) {
    model.validate();
    const double eps = model.params.epsilon;
    const double L = model.length;
    if (L > 2.0 * eps) {
        const double a = model.params.cluster_weight();
        return (L - eps) * a + eps * (3.0 * eps - 2.0 * L) * a * a;
    }
    const double mean = moment_beta0(model, 1);
    return moment_beta0(model, 2) - mean * mean;
}

MeanMaximum mean_argmax(double epsilon, double length) {
    if (!(epsilon > 0.0) || !(length > 0.0)) throw DomainError("epsilon and length must be > 0");
    if (!(length > epsilon))
        throw DomainError("no maximum: the mean number of clusters is identically 0 when length <= epsilon");
    return {1.0 / epsilon, (length / epsilon - 1.0) * std::exp(-1.0)};
}

std::vector<double> var_critical_points(double epsilon, double length) {
    if (!(epsilon > 0.0) || !(length > 0.0)) throw DomainError("epsilon and length must be > 0");
    const double peak_lambda = 1.0 / epsilon;
    std::vector<double> roots{peak_lambda};

    // Var = (L-ε)a + c a² with a = λe^{-λε}; dVar/dλ = a'(λ) ((L-ε) + 2c a).
    double level = 0.0;
    if (length > 2.0 * epsilon)
        level = (length - epsilon) / (2.0 * epsilon * (2.0 * length - 3.0 * epsilon));
    else if (length > epsilon)
        level = 1.0 / (2.0 * (length - epsilon));
    else
        return roots;

    const double peak = std::exp(-1.0) / epsilon;
    if (!(level < peak)) return roots;

    auto h = [&](double lam) { return lam * std::exp(-lam * epsilon) - level; };
    auto bisect = [&](double lo, double hi) {
        // h(lo) and h(hi) have opposite signs
        const bool rising = h(lo) < 0.0;
        for (int it = 0; it < 400 && hi - lo > 1e-10; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((h(mid) < 0.0) == rising)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };

    roots.push_back(bisect(0.0, peak_lambda));
    double upper = 2.0 * peak_lambda;
    while (h(upper) >= 0.0) upper *= 2.0;
    roots.push_back(bisect(peak_lambda, upper));
    std::sort(roots.begin(), roots.end());
    return roots;
}

double coverage_prob(const IntervalModel& model) {
    model.validate();
    const ModelParams& p = model.params;
    const double eps = p.epsilon;
    const double L = model.length;
    const MixedLaw law = law_B(p);
    const double continuous_mass = 1.0 - law.atom_mass;

    // Pr(B >= t): 1 up to ε (B >= ε always), then the continuous mass left beyond t.
    auto survival = [&](double t) {
        if (t <= eps) return 1.0;
        const auto cuts = lattice_breakpoints(eps, t, eps, eps);
        const auto inner = integrate(law.density, eps, t, 1e-13, cuts);
        return clamp_probability(continuous_mass - inner.value);
    };
    auto integrand = [&](double x) { return p.lambda * std::exp(-p.lambda * x) * survival(L - x); };

    // survival(L - x) has kinks where L - x hits a lattice point
    std::vector<double> cuts;
    for (double m = 1.0;; m += 1.0) {
        const double x = L - m * eps;
        if (x <= 0.0) break;
        if (x < eps) cuts.push_back(x);
    }
    return clamp_probability(integrate(integrand, 0.0, eps, 1e-10, cuts).value);
}

CoverageCheck coverage_prob_closed(const IntervalModel& model) {
    model.validate();
    const double lam = model.params.lambda;
    const double eps = model.params.epsilon;
    const double L = model.length;

    auto R = [&](long m, long n, double x) {
        const long upper = lattice_floor(x, eps) - 1;
        CompensatedSum<double> acc;
        for (long i = m; i <= upper; ++i) {
            const double y = lam * ((1.0 - static_cast<double>(i)) * eps - x);
            acc.add(std::exp(-lam * eps * static_cast<double>(i + n)) *
                    partial_exp_sum(static_cast<unsigned>(i + n), y));
        }
        return acc.value();
    };

    const double e1 = std::exp(-lam * eps);
    CoverageCheck out;
    out.value = R(0, 1, L) - e1 * R(0, 1, L - eps) - e1 * R(1, 0, L) + e1 * e1 * R(1, 0, L - eps);
    out.reference = coverage_prob(model);
    out.mismatch = !(std::abs(out.value - out.reference) <= 1e-6);
    return out;
}

double incomplete_G(const IntervalModel& model, int k) {
    model.validate();
    const long double lam = model.params.lambda;
    const long double eps = model.params.epsilon;
    const long double L = model.length;
    if (k < -1) throw DomainError("G(k) is defined for k >= -1");
    if (k == -1) return static_cast<double>(std::exp(-lam * L));
    if (!(L > k * eps)) return 0.0;

    const long double z = lam * (L - k * eps);
    const long double kp1 = static_cast<long double>(k) + 1.0L;
    // e^{-z} sum_m (k+1)/(k+1+m) z^m/m!: Poisson(z) weights, no cancellation.
    long double weighted = 0.0L;
    const long double log_z = std::log(z);
    for (long m = 0;; ++m) {
        const long double ml = static_cast<long double>(m);
        const long double poisson = std::exp(ml * log_z - z - std::lgamma(ml + 1.0L));
        weighted += kp1 / (kp1 + ml) * poisson;
        if (ml > z && poisson < 1e-30L * weighted) break;
    }
    const long double log_front = kp1 * log_z - std::lgamma(kp1 + 1.0L) - k * lam * eps;
    return static_cast<double>(std::exp(log_front) * weighted);
}

double incomplete_G_direct(const IntervalModel& model, int k) {
    model.validate();
    const double lam = model.params.lambda;
    const double eps = model.params.epsilon;
    const double L = model.length;
    if (k < -1) throw DomainError("G(k) is defined for k >= -1");
    if (k == -1) return std::exp(-lam * L);
    if (!(L > k * eps)) return 0.0;
    const double inner = std::exp(-k * lam * eps) * partial_exp_sum(static_cast<unsigned>(k), lam * (k * eps - L)) -
                         std::exp(-lam * L);
    return (k % 2 == 0) ? inner : -inner;
}

SeriesValue pmf_incomplete(const IntervalModel& model, unsigned n) {
    model.validate();
    const long upper = lattice_floor(model.length, model.params.epsilon) + 1;
    CompensatedSum<long double> acc;
    BinomialColumn binom{n, n};
    for (long i = n; i <= upper; ++i) {
        if (i > static_cast<long>(n)) binom.advance();
        const long double g = static_cast<long double>(incomplete_G(model, static_cast<int>(i) - 1)) +
                              static_cast<long double>(incomplete_G(model, static_cast<int>(i)));
        const long double sign = ((i + n) % 2 == 0) ? 1.0L : -1.0L;
        acc.add(sign * binom.value * g);
    }
    return clamped(acc.finish());
}

DistributionTable pmf_incomplete_table(const IntervalModel& model) {
    model.validate();
    return build_table(model, support_bound(model) + 1, "incomplete-cluster", pmf_incomplete);
}

SeriesValue pmf_circle(const IntervalModel& model, unsigned n) {
    model.validate();
    const long double eps = model.params.epsilon;
    const long double L = model.length;
    const long double a = model.params.cluster_weight();
    const long K = lattice_floor(model.length, model.params.epsilon);

    auto log_w = [&](long j) {  // log w_j for j >= 1, or -inf when L <= jε
        const long double gap = L - static_cast<long double>(j) * eps;
        if (!(gap > 0.0L)) return -INFINITY * 1.0L;
        const long double jl = static_cast<long double>(j);
        const long double power = j == 1 ? 0.0L : (jl - 1.0L) * std::log(gap * a);
        return std::log(L * a) - std::lgamma(jl + 1.0L) + power;
    };

    CompensatedSum<long double> acc;
    BinomialColumn binom{n, n};
    for (long j = n; j <= K; ++j) {
        if (j > static_cast<long>(n)) binom.advance();
        const long double w = j == 0 ? 1.0L : std::exp(log_w(j));
        const long double sign = ((j - n) % 2 == 0) ? 1.0L : -1.0L;
        acc.add(sign * binom.value * w);
    }
    return clamped(acc.finish());
}

DistributionTable pmf_circle_table(const IntervalModel& model) {
    model.validate();
    return build_table(model, support_bound(model), "circle", pmf_circle);
}

SeriesValue pmf_circle_alternative(const IntervalModel& model, unsigned n) {
    model.validate();
    const long double lam = model.params.lambda;
    const long double eps = model.params.epsilon;
    const long double L = model.length;
    const long double a = model.params.cluster_weight();
    const long K = lattice_floor(model.length, model.params.epsilon);
    const long double empty = std::exp(-lam * L);

    CompensatedSum<long double> acc;
    for (long i = 0; i <= K - static_cast<long>(n); ++i) {
        const long j = static_cast<long>(n) + i;
        const long double jl = static_cast<long double>(j);
        long double t;
        if (j == 0) {
            t = 1.0L / a;  // ([L]a)^{-1} L
        } else {
            const long double gap = std::max(0.0L, L - jl * eps);
            t = std::pow(gap * a, jl - 1.0L) * (L + jl * (1.0L / lam - eps));
        }
        const long double sign = (i % 2 == 0) ? 1.0L : -1.0L;
        acc.add(sign * t / std::tgamma(static_cast<long double>(i) + 1.0L));
    }
    SeriesValue inner = acc.finish();
    const long double front = (1.0L - empty) * a / std::tgamma(static_cast<long double>(n) + 1.0L);
    SeriesValue out{static_cast<double>(front * inner.value + (n == 0 ? empty : 0.0L)),
                    inner.cancellation};
    return clamped(out);
}

}  // namespace rgg1d
