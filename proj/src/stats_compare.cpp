#include "rgg1d/stats_compare.hpp"

#include "rgg1d/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rgg1d {

ComparisonReport compare_pmf(const EmpiricalDistribution& empirical, std::span<const double> analytic,
                             double z_max) {
    if (empirical.total == 0) throw ContractViolation("compare_pmf: empirical distribution is empty");
    const double N = static_cast<double>(empirical.total);
    const long last = std::max<long>(static_cast<long>(analytic.size()) - 1, empirical.max_outcome());

    ComparisonReport report;
    report.tolerance_policy = "binomial z-score per outcome, pass iff max|z| <= " + std::to_string(z_max) +
                              "; chi-square pools expected counts < 5 (informational)";
    double pooled_observed = 0.0;
    double pooled_expected = 0.0;
    unsigned bins = 0;
    for (long n = 0; n <= last; ++n) {
        const double p = n < static_cast<long>(analytic.size()) ? analytic[static_cast<std::size_t>(n)] : 0.0;
        const double p_hat = empirical.estimate(n);
        double variance = p_hat * (1.0 - p_hat);
        if (variance == 0.0) variance = p * (1.0 - p);
        const double se = std::max(std::sqrt(variance / N), 1e-12);
        const double z = (p_hat - p) / se;
        report.per_outcome.push_back({n, p, p_hat, z});
        report.max_abs_z = std::max(report.max_abs_z, std::abs(z));

        const double expected = N * p;
        const double observed = N * p_hat;
        if (expected >= 5.0) {
            report.chi_square += (observed - expected) * (observed - expected) / expected;
            ++bins;
        } else {
            pooled_observed += observed;
            pooled_expected += expected;
        }
    }
    if (pooled_expected > 0.0) {
        report.chi_square += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) /
                             pooled_expected;
        ++bins;
    }
    report.dof = bins > 0 ? bins - 1 : 0;
    report.pass = report.max_abs_z <= z_max;
    return report;
}

ComparisonReport compare_continuous(std::span<const double> sample, const std::function<double(double)>& cdf,
                                    const std::function<double(double)>& cdf_left) {
    if (sample.empty()) throw ContractViolation("compare_continuous: sample is empty");
    if (!std::is_sorted(sample.begin(), sample.end()))
        throw ContractViolation("compare_continuous: sample must be sorted");
    const auto& left = cdf_left ? cdf_left : cdf;

    const double lo = sample.front();
    const double hi = sample.back();
    double previous = cdf(lo);
    for (int k = 1; k <= 1000; ++k) {
        const double x = lo + (hi - lo) * k / 1000.0;
        const double v = cdf(x);
        if (v < previous - 1e-12)
            throw ContractViolation("compare_continuous: cdf is not monotone near x = " + std::to_string(x));
        previous = v;
    }

    const double N = static_cast<double>(sample.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sample.size()) {
        std::size_t j = i;
        while (j + 1 < sample.size() && sample[j + 1] == sample[i]) ++j;
        const double x = sample[i];
        // empirical cdf is i/N just below x and (j+1)/N at x
        d = std::max(d, std::abs(static_cast<double>(i) / N - left(x)));
        d = std::max(d, std::abs(static_cast<double>(j + 1) / N - cdf(x)));
        i = j + 1;
    }

    ComparisonReport report;
    report.ks_statistic = d;
    report.ks_bound = 1.63 / std::sqrt(N);
    report.pass = d <= *report.ks_bound;
    report.tolerance_policy = "Kolmogorov-Smirnov, pass iff D <= 1.63/sqrt(N) (alpha ~ 0.01)";
    return report;
}

nlohmann::json to_json(const ComparisonReport& report) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    doc["per_outcome"] = nlohmann::json::array();
    for (const auto& o : report.per_outcome)
        doc["per_outcome"].push_back(
            {{"outcome", o.outcome}, {"analytic", o.analytic}, {"empirical", o.empirical}, {"z", o.z}});
    doc["max_abs_z"] = report.max_abs_z;
    doc["chi_square"] = report.chi_square;
    doc["dof"] = report.dof;
    doc["ks"] = report.ks_statistic ? nlohmann::json(*report.ks_statistic) : nlohmann::json(nullptr);
    doc["ks_bound"] = report.ks_bound ? nlohmann::json(*report.ks_bound) : nlohmann::json(nullptr);
    doc["verdict"] = report.pass ? "pass" : "fail";
    doc["tolerance_policy"] = report.tolerance_policy;
    return doc;
}

}  // namespace rgg1d
