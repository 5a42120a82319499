#pragma once

// Pass/fail agreement between Monte Carlo tallies and analytic laws.

#include "rgg1d/mc_engine.hpp"

#include "json.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rgg1d {

struct OutcomeComparison {
    long outcome{0};
    double analytic{0.0};
    double empirical{0.0};
    double z{0.0};
};

struct ComparisonReport {
    std::vector<OutcomeComparison> per_outcome;
    double max_abs_z{0.0};
    double chi_square{0.0};
    unsigned dof{0};
    std::optional<double> ks_statistic;
    std::optional<double> ks_bound;
    bool pass{false};
    std::string tolerance_policy;
};

/// Per-outcome z = (p̂ - p) / se with the binomial standard error of p̂
/// (falling back to that of p when p̂ is 0 or 1), floored at 1e-12. Outcomes
/// with expected count < 5 are pooled into one bucket for the chi-square.
/// Passes iff max |z| <= z_max. Throws ContractViolation for an empty tally.
ComparisonReport compare_pmf(const EmpiricalDistribution& empirical, std::span<const double> analytic,
                             double z_max = 4.0);

/// Kolmogorov-Smirnov distance between a sorted sample and a cdf, taking
/// both one-sided limits at every sample value so that atoms in the law
/// (and ties in the sample) are handled. cdf_left(x) = Pr(X < x) defaults to
/// cdf. Passes iff D <= 1.63/sqrt(N). Throws ContractViolation for an empty
/// sample or a cdf that decreases on a 1000-point probe grid.
ComparisonReport compare_continuous(std::span<const double> sorted_sample,
                                    const std::function<double(double)>& cdf,
                                    const std::function<double(double)>& cdf_left = {});

/// JSON document: schema_version, per_outcome[{outcome, analytic, empirical, z}],
/// max_abs_z, chi_square, dof, ks, ks_bound, verdict, tolerance_policy.
nlohmann::json to_json(const ComparisonReport& report);

}  // namespace rgg1d
