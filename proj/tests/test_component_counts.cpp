#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rgg1d/component_counts.hpp"
#include "rgg1d/errors.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using rgg1d::IntervalModel;
using rgg1d::ModelParams;
using Hp = boost::multiprecision::cpp_dec_float_50;

namespace {

std::vector<double> pmf_oracle(const IntervalModel& m) {
    const long k = static_cast<long>(std::floor(m.length / m.params.epsilon + 1e-12));
    const Hp a = Hp(m.params.lambda) * exp(-Hp(m.params.lambda) * Hp(m.params.epsilon));
    std::vector<double> out;
    Hp fn = 1;
    for (long n = 0; n <= k; ++n) {
        if (n > 0) fn *= n;
        Hp sum = 0, fi = 1;
        for (long i = 0; i <= k - n; ++i) {
            if (i > 0) fi *= i;
            const Hp t = pow((Hp(m.length) - Hp(m.params.epsilon) * (n + i)) * a, static_cast<int>(n + i)) / fi;
            sum += (i % 2 ? -t : t);
        }
        out.push_back(static_cast<double>(sum / fn));
    }
    return out;
}

// Random model in the validated regime: λ(L+ε) <= 30, ⌊L/ε⌋ <= 40.
IntervalModel random_model(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        const double eps = std::exp(std::log(0.05) + u(rng) * std::log(40.0));
        const double length = eps * (0.2 + 40.5 * u(rng));
        const double lambda = u(rng) * 30.0 / (length + eps);
        if (lambda <= 0 || std::floor(length / eps) > 40) continue;
        return {{lambda, eps}, length};
    }
}

struct Walk {
    std::vector<double> pts;
};

// Points on [0, L] plus enough of the continuation to close the last cluster.
Walk draw_points(const ModelParams& p, double horizon, std::mt19937_64& rng) {
    std::exponential_distribution<double> gap(p.lambda);
    Walk w;
    double x = gap(rng);
    while (true) {
        w.pts.push_back(x);
        const double g = gap(rng);
        if (x > horizon && g > p.epsilon) break;
        x += g;
    }
    return w;
}

int complete_clusters(const Walk& w, double eps, double length) {
    int count = 0;
    for (std::size_t i = 0; i < w.pts.size(); ++i) {
        const bool last_of_cluster = i + 1 == w.pts.size() || w.pts[i + 1] - w.pts[i] > eps;
        if (last_of_cluster && w.pts[i] + eps <= length) ++count;
    }
    return count;
}

int incomplete_clusters(const Walk& w, double eps, double length) {
    int count = 0;
    for (std::size_t i = 0; i < w.pts.size(); ++i) {
        const bool first_of_cluster = i == 0 || w.pts[i] - w.pts[i - 1] > eps;
        if (first_of_cluster && w.pts[i] <= length) ++count;
    }
    return count;
}

bool covered(const Walk& w, double eps, double length) {
    if (w.pts.front() > eps) return false;
    for (std::size_t i = 0; i + 1 < w.pts.size(); ++i) {
        if (w.pts[i] + eps >= length) return true;
        if (w.pts[i + 1] - w.pts[i] > eps) return false;
    }
    return w.pts.back() + eps >= length;
}

int circle_gaps(std::vector<double> pts, double eps, double length) {
    if (pts.empty()) return 0;
    std::sort(pts.begin(), pts.end());
    int gaps = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1] - pts[i] > eps) ++gaps;
    if (pts.front() + length - pts.back() > eps) ++gaps;
    return gaps;
}

bool within_4sigma(double estimate, double p, int n) {
    const double se = std::sqrt(std::max(p * (1 - p), 1e-300) / n);
    return std::abs(estimate - p) <= 4 * se + 1e-12;
}

}  // namespace

TEST_CASE("explicit polynomials at L = 4, eps = 1") {
    for (double lam : {0.5, 1.0, 2.0}) {
        const IntervalModel m{{lam, 1.0}, 4.0};
        const double x = lam * std::exp(-lam);
        const double expect[] = {1 - 3 * x + 2 * x * x - x * x * x / 6, 3 * x - 4 * x * x + x * x * x / 2,
                                 2 * x * x - x * x * x / 2, x * x * x / 6};
        for (unsigned n = 0; n < 4; ++n) CHECK(std::abs(rgg1d::pmf_beta0(m, n).value - expect[n]) <= 1e-12);
        for (unsigned n = 4; n < 10; ++n) CHECK(rgg1d::pmf_beta0(m, n).value == 0.0);
    }
}

TEST_CASE("golden values at lambda = eps = 1, L = 4") {
    const IntervalModel m{{1.0, 1.0}, 4.0};
    const auto t = rgg1d::pmf_beta0_table(m);
    REQUIRE(t.support_max == 4);
    CHECK(t[0] == doctest::Approx(0.158734398).epsilon(1e-8));
    CHECK(t[1] == doctest::Approx(0.587190725).epsilon(1e-8));
    CHECK(t[2] == doctest::Approx(0.245777032).epsilon(1e-8));
    CHECK(t[3] == doctest::Approx(0.00829784473).epsilon(1e-8));
    CHECK(t[4] == 0.0);
    CHECK(rgg1d::mean_beta0(m) == doctest::Approx(3 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("random models: oracle, normalization, support, moments") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 150; ++rep) {
        const IntervalModel m = random_model(rng);
        CAPTURE(m.params.lambda);
        CAPTURE(m.params.epsilon);
        CAPTURE(m.length);
        const auto ref = pmf_oracle(m);
        const auto t = rgg1d::pmf_beta0_table(m);
        const unsigned K = static_cast<unsigned>(ref.size() - 1);
        CHECK(t.support_max == K);
        double sum = 0;
        for (unsigned n = 0; n <= K; ++n) {
            CHECK(std::abs(t[n] - ref[n]) < 1e-11);
            sum += t[n];
        }
        CHECK(std::abs(sum - 1) < 1e-9);
        CHECK(rgg1d::pmf_beta0(m, K + 1).value == 0.0);

        for (unsigned mo = 1; mo <= 4; ++mo) {
            double direct = 0;
            for (unsigned n = 1; n <= K; ++n) direct += std::pow(n, mo) * t[n];
            CHECK(rgg1d::moment_beta0(m, mo) == doctest::Approx(direct).epsilon(1e-9).scale(1e-12));
        }
        const double m1 = rgg1d::moment_beta0(m, 1), m2 = rgg1d::moment_beta0(m, 2);
        CHECK(std::abs(rgg1d::mean_beta0(m) - m1) <= 1e-12 * std::max(1.0, m1));
        CHECK(std::abs(rgg1d::var_beta0(m) - (m2 - m1 * m1)) <= 1e-12 * std::max(1.0, m2));

        const auto inc = rgg1d::pmf_incomplete_table(m);
        CHECK(inc.support_max == K + 1);
        double s_inc = 0;
        for (double v : inc.probs) s_inc += v;
        CHECK(std::abs(s_inc - 1) < 1e-9);

        const auto circ = rgg1d::pmf_circle_table(m);
        double s_circ = 0;
        for (double v : circ.probs) s_circ += v;
        CHECK(std::abs(s_circ - 1) < 1e-9);

        // β0 <= β0' pathwise, so the cdf of β0 dominates
        double c0 = 0, c1 = 0;
        for (unsigned n = 0; n <= K; ++n) {
            c0 += t[n];
            c1 += inc[n];
            CHECK(c0 >= c1 - 1e-9);
        }
    }
}

TEST_CASE("long intervals go through the propagated route and still normalize") {
    for (auto m : {IntervalModel{{5, 0.1}, 20}, IntervalModel{{1, 1}, 120}, IntervalModel{{12, 0.05}, 9}}) {
        const auto t = rgg1d::pmf_beta0_table(m);
        double sum = 0, mean = 0, second = 0;
        for (unsigned n = 0; n <= t.support_max; ++n) {
            sum += t[n];
            mean += n * t[n];
            second += double(n) * n * t[n];
        }
        CHECK(std::abs(sum - 1) < 1e-9);
        CHECK(mean == doctest::Approx(rgg1d::mean_beta0(m)).epsilon(1e-9));
        CHECK(second - mean * mean == doctest::Approx(rgg1d::var_beta0(m)).epsilon(1e-8));
    }
}

TEST_CASE("Poisson limit for tiny eps") {
    for (double lam : {1.0, 2.0}) {
        const IntervalModel m{{lam, 1e-6}, 1.0};
        double pois = std::exp(-lam);
        for (unsigned n = 0; n <= 8; ++n) {
            CHECK(std::abs(rgg1d::pmf_beta0(m, n).value - pois) < 1e-4);
            pois *= lam / (n + 1);
        }
    }
}

TEST_CASE("continuity in L across lattice points") {
    const ModelParams p{1.3, 0.8};
    for (int k = 1; k < 6; ++k) {
        const double L = k * 0.8;
        for (unsigned n = 0; n < 5; ++n) {
            const double lo = rgg1d::pmf_beta0({p, L - 1e-9}, n).value;
            const double hi = rgg1d::pmf_beta0({p, L + 1e-9}, n).value;
            CHECK(std::abs(lo - hi) < 1e-8);
        }
    }
}

TEST_CASE("mean maximum and variance critical points") {
    const auto mx = rgg1d::mean_argmax(1.0, 4.0);
    CHECK(mx.lambda_star == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mx.value == doctest::Approx(3 * std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rgg1d::mean_argmax(1.0, 1.0), rgg1d::DomainError);

    for (double lam : {0.5, 0.9, 1.1, 2.0})
        CHECK(rgg1d::mean_beta0({{lam, 1.0}, 4.0}) < mx.value);

    const auto roots = rgg1d::var_critical_points(1.0, 4.0);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(0.49).epsilon(0.01));
    CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(roots[2] == doctest::Approx(1.78).epsilon(0.01));
    for (double r : roots) {
        const double h = 1e-6;
        const double d = (rgg1d::var_beta0({{r + h, 1.0}, 4.0}) - rgg1d::var_beta0({{r - h, 1.0}, 4.0})) / (2 * h);
        CHECK(std::abs(d) < 1e-5);
    }
    // a short interval has only the 1/eps point when the level sits above the peak
    for (double L : {1.5, 2.5, 10.0}) {
        const auto r = rgg1d::var_critical_points(1.0, L);
        CHECK(std::find_if(r.begin(), r.end(), [](double v) { return std::abs(v - 1.0) < 1e-9; }) != r.end());
        for (double v : r) {
            const double h = 1e-6;
            const double d = (rgg1d::var_beta0({{v + h, 1.0}, L}) - rgg1d::var_beta0({{v - h, 1.0}, L})) / (2 * h);
            CHECK(std::abs(d) < 1e-5);
        }
    }
}

TEST_CASE("variance is non-negative") {
    std::mt19937_64 rng(8);
    for (int rep = 0; rep < 100; ++rep) {
        const IntervalModel m = random_model(rng);
        CHECK(rgg1d::var_beta0(m) >= -1e-12);
    }
}

TEST_CASE("complete and incomplete counts against direct simulation") {
    const ModelParams p{1.0, 1.0};
    const double L = 4.0;
    const int reps = 200000;
    std::mt19937_64 rng(1234);
    std::vector<int> comp(8, 0), inc(8, 0);
    for (int r = 0; r < reps; ++r) {
        const Walk w = draw_points(p, L, rng);
        ++comp[complete_clusters(w, p.epsilon, L)];
        ++inc[incomplete_clusters(w, p.epsilon, L)];
    }
    const auto tc = rgg1d::pmf_beta0_table({p, L});
    const auto ti = rgg1d::pmf_incomplete_table({p, L});
    for (unsigned n = 0; n < 8; ++n) {
        CHECK(within_4sigma(comp[n] / double(reps), tc[n], reps));
        CHECK(within_4sigma(inc[n] / double(reps), ti[n], reps));
    }
    double mean_inc = 0;
    for (unsigned n = 0; n <= ti.support_max; ++n) mean_inc += n * ti[n];
    CHECK(mean_inc == doctest::Approx(1 + std::exp(-1.0) * (L - 1 - 1)).epsilon(1e-10));
}

TEST_CASE("incomplete G: stable and literal routes agree") {
    for (auto m : {IntervalModel{{1, 1}, 4}, IntervalModel{{0.5, 0.7}, 3.3}, IntervalModel{{3, 0.4}, 2.9}}) {
        CHECK(rgg1d::incomplete_G(m, -1) == doctest::Approx(std::exp(-m.params.lambda * m.length)));
        const int K = static_cast<int>(std::floor(m.length / m.params.epsilon));
        for (int k = 0; k <= K + 1; ++k)
            CHECK(std::abs(rgg1d::incomplete_G(m, k) - rgg1d::incomplete_G_direct(m, k)) < 1e-14);
        CHECK(rgg1d::incomplete_G(m, K + 1) == 0.0);
    }
}

TEST_CASE("coverage") {
    SUBCASE("simulation") {
        const int reps = 200000;
        for (auto m : {IntervalModel{{1, 1}, 2}, IntervalModel{{3, 0.5}, 1.7}, IntervalModel{{0.8, 2}, 3.1}}) {
            std::mt19937_64 rng(42);
            int hits = 0;
            for (int r = 0; r < reps; ++r)
                if (covered(draw_points(m.params, m.length, rng), m.params.epsilon, m.length)) ++hits;
            CHECK(within_4sigma(hits / double(reps), rgg1d::coverage_prob(m), reps));
        }
    }
    SUBCASE("known value and monotonicity") {
        CHECK(rgg1d::coverage_prob({{1, 1}, 2}) == doctest::Approx(0.264241118).epsilon(1e-8));
        double prev = 1.0;
        for (double L = 0.25; L < 6; L += 0.25) {
            const double c = rgg1d::coverage_prob({{1.5, 1.0}, L});
            CHECK(c <= prev + 1e-12);
            CHECK(c >= 0.0);
            prev = c;
        }
    }
    SUBCASE("closed form is reported, not trusted") {
        const auto chk = rgg1d::coverage_prob_closed({{1, 1}, 2});
        CHECK(chk.reference == doctest::Approx(rgg1d::coverage_prob({{1, 1}, 2})));
        CHECK(chk.mismatch == (std::abs(chk.value - chk.reference) > 1e-6));
    }
}

TEST_CASE("circle") {
    const ModelParams p{1.0, 1.0};
    const double L = 4.0;
    const int reps = 200000;
    std::mt19937_64 rng(5);
    std::poisson_distribution<int> count(p.lambda * L);
    std::uniform_real_distribution<double> pos(0.0, L);
    std::exponential_distribution<double> gap(p.lambda);
    std::vector<int> hist(8, 0), palm(8, 0);
    for (int r = 0; r < reps; ++r) {
        std::vector<double> pts(count(rng));
        for (auto& x : pts) x = pos(rng);
        ++hist[circle_gaps(pts, p.epsilon, L)];
        std::vector<double> pinned{0.0};
        for (double x = gap(rng); x < L; x += gap(rng)) pinned.push_back(x);
        ++palm[circle_gaps(pinned, p.epsilon, L)];
    }
    const auto t = rgg1d::pmf_circle_table({p, L});
    const double empty = std::exp(-p.lambda * L);
    for (unsigned n = 0; n < 8; ++n) {
        CHECK(within_4sigma(hist[n] / double(reps), t[n], reps));
        // the alternative formula is the Palm law reweighted by Pr(N > 0)
        const double alt = rgg1d::pmf_circle_alternative({p, L}, n).value;
        const double expected_alt = (n == 0 ? empty : 0.0) + (1 - empty) * palm[n] / double(reps);
        const double se = (1 - empty) * std::sqrt(std::max(alt * (1 - alt), 1e-300) / reps);
        CHECK(std::abs(alt - expected_alt) <= 4 * se + 1e-12);
    }
    CHECK(t[0] == doctest::Approx(0.0366319893).epsilon(1e-8));
    CHECK(rgg1d::pmf_circle_alternative({p, L}, 0).value == doctest::Approx(0.0542766899).epsilon(1e-8));
}

TEST_CASE("invalid models are rejected") {
    CHECK_THROWS_AS(rgg1d::pmf_beta0_table({{-1, 1}, 4}), rgg1d::DomainError);
    CHECK_THROWS_AS(rgg1d::pmf_beta0_table({{1, 0}, 4}), rgg1d::DomainError);
    CHECK_THROWS_AS(rgg1d::pmf_beta0_table({{1, 1}, -4}), rgg1d::DomainError);
    CHECK_THROWS_AS(rgg1d::coverage_prob({{1, 1}, std::nan("")}), rgg1d::DomainError);
}
