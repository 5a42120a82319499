#include "rgg1d/mc_engine.hpp"

#include "rgg1d/errors.hpp"

#include <algorithm>
#include <exception>
#include <thread>

namespace rgg1d {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Runs body(begin, end, chunk) over [0, total) split into contiguous chunks.
template <class Body>
void for_chunks(std::uint64_t total, unsigned threads, Body&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(total, 1024))));
    if (threads == 1) {
        body(0, total, 0u);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned c = 0; c < threads; ++c) {
        const std::uint64_t begin = total * c / threads;
        const std::uint64_t end = total * (c + 1) / threads;
        pool.emplace_back([&, begin, end, c] {
            try {
                body(begin, end, c);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

void SampleConfig::validate() const {
    if (replications < 1) throw DomainError("replications must be >= 1");
    if (parallelism_hint < 1) throw DomainError("parallelism_hint must be >= 1");
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t replication) {
    return splitmix64(seed ^ splitmix64(replication + 0x9E3779B97F4A7C15ULL));
}

std::uint64_t Stream::poisson(double mean) {
    std::uint64_t k = 0;
    double t = exponential(1.0);
    while (t <= mean) {
        ++k;
        t += exponential(1.0);
    }
    return k;
}

PointSample sample_interval(const ModelParams& params, double length, Stream& stream) {
    PointSample s;
    s.domain_length = length;
    for (double x = stream.exponential(params.lambda); x <= length; x += stream.exponential(params.lambda))
        s.positions.push_back(x);
    return s;
}

PointSample sample_until_closed(const ModelParams& params, std::size_t closed, Stream& stream) {
    PointSample s;
    double x = stream.exponential(params.lambda);
    s.positions.push_back(x);
    std::size_t ended = 0;
    while (ended < closed) {
        const double gap = stream.exponential(params.lambda);
        if (gap > params.epsilon) ++ended;
        x += gap;
        s.positions.push_back(x);
    }
    s.domain_length = x;
    return s;
}

PointSample sample_circle(const ModelParams& params, double length, Stream& stream) {
    PointSample s;
    s.domain_length = length;
    const std::uint64_t n = stream.poisson(params.lambda * length);
    s.positions.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) s.positions.push_back(length * stream.uniform());
    std::sort(s.positions.begin(), s.positions.end());
    return s;
}

PointSample sample_circle_palm(const ModelParams& params, double length, Stream& stream) {
    PointSample s = sample_interval(params, length, stream);
    s.positions.insert(s.positions.begin(), 0.0);
    if (s.positions.back() >= length) s.positions.pop_back();  // x == L is the origin again
    return s;
}

ClusterDecomposition decompose(const PointSample& points, double epsilon) {
    const auto& x = points.positions;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw ContractViolation("decompose: positions must be strictly increasing (index " +
                                    std::to_string(i) + ")");
    ClusterDecomposition out;
    if (x.empty()) return out;

    Cluster current{x[0], x[0], 0.0, 1};
    auto close = [&] {
        current.end = current.last + epsilon;
        if (current.end <= points.domain_length) ++out.complete_count;
        out.clusters.push_back(current);
    };
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (x[i] - x[i - 1] > epsilon) {
            close();
            current = Cluster{x[i], x[i], 0.0, 1};
        } else {
            current.last = x[i];
            ++current.points;
        }
    }
    close();
    out.incomplete_count = out.clusters.size();
    return out;
}

unsigned circle_chi(const PointSample& points, double epsilon) {
    const auto& x = points.positions;
    if (x.empty()) return 0;
    unsigned gaps = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] - x[i - 1] > epsilon) ++gaps;
    if (x.front() + points.domain_length - x.back() > epsilon) ++gaps;
    return gaps;
}

bool coverage_indicator(const PointSample& points, double epsilon, double length) {
    const auto& x = points.positions;
    if (x.empty() || x.front() > epsilon) return false;
    double last = x.front();
    for (std::size_t i = 1; i < x.size() && x[i] - last <= epsilon; ++i) last = x[i];
    return (last - x.front()) + epsilon >= length - x.front();
}

Scenario parse_scenario(std::string_view name) {
    if (name == "complete") return Scenario::complete;
    if (name == "incomplete") return Scenario::incomplete;
    if (name == "circle") return Scenario::circle;
    if (name == "coverage") return Scenario::coverage;
    if (name == "B" || name == "b-law") return Scenario::b_law;
    if (name == "U" || name == "u-law") return Scenario::u_law;
    throw DomainError("unknown scenario '" + std::string(name) +
                      "' (expected complete|incomplete|circle|coverage|B|U)");
}

std::string_view scenario_name(Scenario s) {
    switch (s) {
    case Scenario::complete: return "complete";
    case Scenario::incomplete: return "incomplete";
    case Scenario::circle: return "circle";
    case Scenario::coverage: return "coverage";
    case Scenario::b_law: return "B";
    case Scenario::u_law: return "U";
    }
    return "?";
}

double EmpiricalDistribution::estimate(long n) const {
    if (total == 0) return 0.0;
    const auto it = counts.find(n);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

double EmpiricalDistribution::std_error(long n) const {
    if (total == 0) return 0.0;
    const double p = estimate(n);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(total));
}

EmpiricalDistribution estimate_distribution(const ModelParams& params, Scenario scenario, double length,
                                            const SampleConfig& config) {
    params.validate();
    config.validate();
    if (is_continuous(scenario))
        throw DomainError("scenario " + std::string(scenario_name(scenario)) + " produces a continuous sample");
    if (!(length > 0.0)) throw DomainError("length must be > 0");

    auto outcome = [&](Stream& rng) -> long {
        switch (scenario) {
        case Scenario::complete:
            return static_cast<long>(decompose(sample_interval(params, length, rng), params.epsilon).complete_count);
        case Scenario::incomplete:
            return static_cast<long>(decompose(sample_interval(params, length, rng), params.epsilon).incomplete_count);
        case Scenario::circle:
            return circle_chi(sample_circle(params, length, rng), params.epsilon);
        case Scenario::coverage:
            return coverage_indicator(sample_until_closed(params, 1, rng), params.epsilon, length) ? 1 : 0;
        default:
            return 0;
        }
    };

    const unsigned chunks = std::max(1u, config.parallelism_hint);
    std::vector<std::map<long, std::uint64_t>> partial(chunks);
    for_chunks(config.replications, chunks, [&](std::uint64_t begin, std::uint64_t end, unsigned c) {
        auto& local = partial[c];
        for (std::uint64_t r = begin; r < end; ++r) {
            Stream rng = substream(config.seed, r);
            ++local[outcome(rng)];
        }
    });

    EmpiricalDistribution dist;
    dist.total = config.replications;
    for (const auto& local : partial)
        for (const auto& [n, count] : local) dist.counts[n] += count;
    return dist;
}

ContinuousSample estimate_sample(const ModelParams& params, Scenario scenario, unsigned u_order,
                                 const SampleConfig& config) {
    params.validate();
    config.validate();
    if (!is_continuous(scenario))
        throw DomainError("scenario " + std::string(scenario_name(scenario)) + " produces integer outcomes");
    if (scenario == Scenario::u_law && u_order < 1) throw DomainError("U_n needs n >= 1");

    const std::size_t closed = scenario == Scenario::b_law ? 1 : u_order;
    ContinuousSample out;
    out.values.resize(config.replications);
    std::vector<std::uint8_t> singleton(config.replications, 0);

    const unsigned chunks = std::max(1u, config.parallelism_hint);
    for_chunks(config.replications, chunks, [&](std::uint64_t begin, std::uint64_t end, unsigned) {
        for (std::uint64_t r = begin; r < end; ++r) {
            Stream rng = substream(config.seed, r);
            const auto d = decompose(sample_until_closed(params, closed, rng), params.epsilon);
            const Cluster& first = d.clusters.front();
            if (scenario == Scenario::b_law) {
                out.values[r] = first.length(params.epsilon);
                singleton[r] = first.points == 1;
            } else {
                out.values[r] = d.clusters[u_order].start - first.start;
            }
        }
    });
    for (auto s : singleton) out.singleton_count += s;
    std::sort(out.values.begin(), out.values.end());
    return out;
}

}  // namespace rgg1d
