#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rgg1d/errors.hpp"
#include "rgg1d/special_fn.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <thread>
#include <vector>

using rgg1d::BigInt;

namespace {

// Counts set partitions of {0..m-1} into k blocks by walking restricted growth strings.
std::vector<unsigned long> partitions_by_blocks(unsigned m) {
    std::vector<unsigned long> counts(m + 1, 0);
    std::vector<unsigned> rgs(m, 0);
    std::function<void(unsigned, unsigned)> walk = [&](unsigned pos, unsigned blocks) {
        if (pos == m) {
            ++counts[blocks];
            return;
        }
        for (unsigned b = 0; b <= blocks; ++b) {
            rgs[pos] = b;
            walk(pos + 1, b == blocks ? blocks + 1 : blocks);
        }
    };
    if (m == 0)
        counts[0] = 1;
    else
        walk(0, 0);
    return counts;
}

// Bell numbers from the Bell triangle.
std::vector<BigInt> bell_numbers(unsigned count) {
    std::vector<BigInt> bell{1};
    std::vector<BigInt> row{1};
    while (bell.size() < count) {
        std::vector<BigInt> next{row.back()};
        for (const auto& v : row) next.push_back(next.back() + v);
        bell.push_back(next.front());
        row = std::move(next);
    }
    return bell;
}

double polylog_series(unsigned m, double z) {
    using Hp = boost::multiprecision::cpp_dec_float_50;
    Hp sum = 0, zk = 1;
    for (int k = 1; k < 20000; ++k) {
        zk *= z;
        const Hp term = zk * pow(Hp(k), static_cast<int>(m));
        sum += term;
        if (k > 50 && abs(term) < 1e-30 * abs(sum)) break;
    }
    return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("stirling numbers match partition enumeration") {
    for (unsigned m = 0; m <= 10; ++m) {
        const auto counts = partitions_by_blocks(m);
        for (unsigned k = 0; k <= m; ++k) CHECK(rgg1d::stirling2(m, k) == BigInt(counts[k]));
        CHECK(rgg1d::stirling2(m, m + 1) == 0);
    }
}

TEST_CASE("row sums are Bell numbers") {
    const auto bell = bell_numbers(rgg1d::kStirlingMaxOrder + 1);
    for (unsigned m = 0; m <= rgg1d::kStirlingMaxOrder; ++m) {
        const auto& row = rgg1d::stirling_row(m);
        BigInt sum = 0;
        for (unsigned k = 0; k <= m; ++k) sum += row[k];
        CHECK(sum == bell[m]);
    }
    // B_15 = 1382958545
    CHECK(bell[15] == BigInt(1382958545));
}

TEST_CASE("falling factorial identity x^m = sum S(m,k) x(x-1)...(x-k+1)") {
    for (unsigned m : {1u, 5u, 17u, 40u, 64u}) {
        for (long x : {1L, 3L, 10L, 123L}) {
            BigInt lhs = 1;
            for (unsigned i = 0; i < m; ++i) lhs *= x;
            BigInt rhs = 0;
            BigInt falling = 1;
            for (unsigned k = 0; k <= m; ++k) {
                rhs += rgg1d::stirling2(m, k) * falling;
                falling *= (x - static_cast<long>(k));
            }
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("known values") {
    CHECK(rgg1d::stirling2(0, 0) == 1);
    CHECK(rgg1d::stirling2(5, 0) == 0);
    CHECK(rgg1d::stirling2(4, 2) == 7);
    CHECK(rgg1d::stirling2(10, 5) == 42525);
    CHECK(rgg1d::stirling2(20, 10) == BigInt("5917584964655"));
    // S(m, 2) = 2^{m-1} - 1
    BigInt two = 1;
    for (int i = 0; i < 63; ++i) two *= 2;
    CHECK(rgg1d::stirling2(64, 2) == two - 1);
    // S(m, m-1) = C(m, 2)
    CHECK(rgg1d::stirling2(64, 63) == 64 * 63 / 2);
}

TEST_CASE("capacity") {
    CHECK_NOTHROW(rgg1d::stirling_row(64));
    CHECK_THROWS_AS(rgg1d::stirling_row(65), rgg1d::CapacityError);
    CHECK_THROWS_AS(rgg1d::stirling2(100, 3), rgg1d::CapacityError);
}

TEST_CASE("concurrent row access is consistent") {
    std::vector<std::thread> pool;
    std::vector<int> ok(8, 0);
    for (int t = 0; t < 8; ++t)
        pool.emplace_back([t, &ok] {
            bool good = true;
            for (unsigned m = 64; m-- > 0;) good = good && rgg1d::stirling_row((m + 7 * t) % 65)[1] == ((m + 7 * t) % 65 ? 1 : 0);
            ok[t] = good;
        });
    for (auto& th : pool) th.join();
    for (int v : ok) CHECK(v == 1);
}

TEST_CASE("polylog of negative order") {
    SUBCASE("closed forms for m = 0, 1, 2") {
        for (double z : {-3.0, -0.5, 0.0, 0.25, 0.9}) {
            CHECK(rgg1d::polylog_neg(0, z) == doctest::Approx(z / (1 - z)).epsilon(1e-14));
            CHECK(rgg1d::polylog_neg(1, z) == doctest::Approx(z / ((1 - z) * (1 - z))).epsilon(1e-14));
            CHECK(rgg1d::polylog_neg(2, z) ==
                  doctest::Approx(z * (1 + z) / std::pow(1 - z, 3)).epsilon(1e-13));
        }
    }
    SUBCASE("defining series") {
        for (unsigned m = 0; m <= 8; ++m)
            for (double z : {-0.7, -0.2, 0.1, 0.5, 0.8}) {
                const double ref = polylog_series(m, z);
                CHECK(rgg1d::polylog_neg(m, z) == doctest::Approx(ref).epsilon(1e-12));
            }
    }
    SUBCASE("z >= 1 rejected") {
        CHECK_THROWS_AS(rgg1d::polylog_neg(2, 1.0), rgg1d::DomainError);
        CHECK_THROWS_AS(rgg1d::polylog_neg(2, 1.5), rgg1d::DomainError);
        CHECK_THROWS_AS(rgg1d::polylog_neg(2, std::nan("")), rgg1d::DomainError);
    }
}

TEST_CASE("partial exponential sums") {
    CHECK(rgg1d::partial_exp_sum(0, 3.0) == 1.0);
    CHECK(rgg1d::partial_exp_sum(2, 3.0) == doctest::Approx(1 + 3 + 4.5));
    for (double y : {-5.0, -1.0, 0.5, 7.0})
        CHECK(rgg1d::partial_exp_sum(200, y) == doctest::Approx(std::exp(y)).epsilon(1e-12));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double y = u(rng);
        const unsigned j = static_cast<unsigned>(rng() % 30);
        long double ref = 0, term = 1;
        for (unsigned i = 0; i <= j; ++i) {
            ref += term;
            term *= y / (i + 1);
        }
        CHECK(rgg1d::partial_exp_sum(j, y) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12).scale(1.0));
    }
}
