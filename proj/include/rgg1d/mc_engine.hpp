#pragma once

// Monte Carlo oracle. Samples the Poisson process on an interval or a circle,
// splits it into clusters exactly as the analytic side defines them, and
// tallies every quantity the closed forms predict.
//
// Reproducibility: replication r of a run with seed s draws from its own
// std::mt19937_64 seeded with substream_seed(s, r). Aggregation is integer
// counting (or placing values at index r), so the result does not depend on
// how replications are spread over threads.

#include "rgg1d/model.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rgg1d {

struct SampleConfig {
    std::uint64_t seed{0};
    std::uint64_t replications{1};
    unsigned parallelism_hint{1};

    void validate() const;
};

/// splitmix64(seed ^ splitmix64(r + 0x9E3779B97F4A7C15)). Stable across versions.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t replication);

class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1), 53-bit grid offset by half a step, never 0 or 1.
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double exponential(double rate) { return -std::log(uniform()) / rate; }
    /// Number of unit-rate exponential arrivals in [0, mean].
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
};

inline Stream substream(std::uint64_t seed, std::uint64_t replication) {
    return Stream(substream_seed(seed, replication));
}

struct PointSample {
    std::vector<double> positions;  ///< strictly increasing
    double domain_length{0.0};
};

struct Cluster {
    double start{0.0};  ///< A_i, first point
    double last{0.0};   ///< last point
    double end{0.0};    ///< E_i = last + ε
    std::size_t points{0};

    [[nodiscard]] double length(double epsilon) const { return (last - start) + epsilon; }
};

struct ClusterDecomposition {
    std::vector<Cluster> clusters;
    std::size_t complete_count{0};    ///< clusters with E_i <= L
    std::size_t incomplete_count{0};  ///< all clusters
};

/// Cumulative exponential(λ) gaps from 0 while the position stays <= L.
PointSample sample_interval(const ModelParams& params, double length, Stream& stream);

/// Points from 0 onwards until `closed` clusters have ended; the sample also
/// holds the first point of the next cluster, so cluster `closed` + 1 has started.
PointSample sample_until_closed(const ModelParams& params, std::size_t closed, Stream& stream);

/// N ~ Poisson(λL), then N sorted uniforms on [0, L).
PointSample sample_circle(const ModelParams& params, double length, Stream& stream);

/// A point at 0 plus a Poisson(λ) process on (0, L): the circle seen from a typical point.
PointSample sample_circle_palm(const ModelParams& params, double length, Stream& stream);

/// Splits at gaps > ε (a gap of exactly ε stays connected). Throws
/// ContractViolation when positions are not strictly increasing.
ClusterDecomposition decompose(const PointSample& points, double epsilon);

/// Number of circular gaps (wraparound included) longer than ε. 0 for an
/// empty circle, and 0 when one cluster wraps all the way around.
unsigned circle_chi(const PointSample& points, double epsilon);

/// X_1 <= ε and the first cluster reaches L (B_1 >= L - X_1). The sample must
/// extend until the first cluster has closed; trailing points are ignored.
bool coverage_indicator(const PointSample& points, double epsilon, double length);

enum class Scenario { complete, incomplete, circle, coverage, b_law, u_law };

Scenario parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario s);
inline bool is_continuous(Scenario s) { return s == Scenario::b_law || s == Scenario::u_law; }

struct EmpiricalDistribution {
    std::map<long, std::uint64_t> counts;
    std::uint64_t total{0};

    [[nodiscard]] double estimate(long n) const;
    [[nodiscard]] double std_error(long n) const;
    [[nodiscard]] long max_outcome() const { return counts.empty() ? 0 : counts.rbegin()->first; }
};

struct ContinuousSample {
    std::vector<double> values;       ///< sorted ascending
    std::uint64_t singleton_count{0}; ///< B-law: clusters made of one point
};

/// Integer outcomes: complete/incomplete counts on [0, L], χ on the circle,
/// coverage as 0/1. Throws DomainError for continuous scenarios.
EmpiricalDistribution estimate_distribution(const ModelParams& params, Scenario scenario, double length,
                                            const SampleConfig& config);

/// Raw sorted samples of B (scenario b_law) or U_n (scenario u_law, n = u_order >= 1).
ContinuousSample estimate_sample(const ModelParams& params, Scenario scenario, unsigned u_order,
                                 const SampleConfig& config);

}  // namespace rgg1d
