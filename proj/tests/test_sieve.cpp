#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dkap/arith.hpp"
#include "dkap/divisor.hpp"
#include "dkap/errors.hpp"
#include "dkap/euler.hpp"
#include "dkap/sieve.hpp"

using namespace dkap;

namespace {

ExactRational Dk(std::uint64_t n, unsigned k) { return D_k(factorize(n), DivisorParams(k)); }

// Direct per-n summation over the divisor-function module.
ExactRational direct_sum(std::uint64_t x, unsigned k, std::uint64_t q, std::uint64_t a, SumMode mode) {
    ExactRational s(0);
    for (std::uint64_t n = 1; n <= x; ++n) {
        if (mode == SumMode::coprime && std::gcd(n, q) != 1) continue;
        if (mode == SumMode::progression && n % q != a % q) continue;
        s += Dk(n, k);
    }
    return s;
}

SieveOptions small_segments(unsigned workers = 1) {
    SieveOptions o;
    o.segment_size = 777;
    o.workers = workers;
    return o;
}

}  // namespace

TEST_CASE("bulk_D_k examples") {
    const auto v = bulk_D_k_values(10, 2);
    const std::vector<ExactRational> expected = {1, 1, 1, {3, 2}, 1, 1, 1, 2, {3, 2}, 1};
    CHECK(v == expected);
    CHECK(bulk_D_k_values(1, 5) == std::vector<ExactRational>{1});
    CHECK(bulk_D_k_values(4, 3) == std::vector<ExactRational>{1, 1, 1, 2});
}

TEST_CASE("bulk_D_k matches per-n evaluation across segment boundaries") {
    for (unsigned k : {2u, 3u, 7u}) {
        std::uint64_t expected_n = 1;
        bulk_D_k(
            50'000, k,
            [&](std::uint64_t n, const ExactRational& v) {
                REQUIRE(n == expected_n++);
                REQUIRE(v == Dk(n, k));
            },
            4096 + 13);
        CHECK(expected_n == 50'001);
    }
}

TEST_CASE("sum examples") {
    const auto full = sum_full(10, 2);
    REQUIRE(full.exact);
    CHECK(*full.exact == ExactRational(12));
    CHECK(full.main_term == doctest::Approx(compute_A_k(2).value * 10));
    CHECK(full.residual == doctest::Approx(full.approx - full.main_term));
    CHECK(*sum_full(1, 6).exact == ExactRational(1));

    CHECK(*sum_coprime(10, 2, 2).exact == ExactRational(11, 2));
    CHECK(*sum_progression(10, 2, 3, 1).exact == ExactRational(9, 2));
    CHECK(sum_progression(10, 2, 3, 1).main_term == doctest::Approx(ap_leading_coefficient(3, 2) * 10));
    CHECK(*sum_coprime(1000, 3, 1).exact == *sum_full(1000, 3).exact);
    CHECK(*sum_progression(1000, 3, 1, 1).exact == *sum_full(1000, 3).exact);
}

TEST_CASE("sum_progression rejects residues not coprime to q") {
    CHECK_THROWS_AS(sum_progression(10, 2, 4, 2), DomainError);
    CHECK_THROWS_AS(sum_progression(10, 2, 4, 5), DomainError);
    CHECK_THROWS_AS(sum_progression(10, 2, 4, 0), DomainError);
    CHECK_THROWS_AS(sum_full(0, 2), DomainError);
    CHECK_THROWS_AS(sum_full(10, 1), DomainError);
}

TEST_CASE("sums match direct summation") {
    for (unsigned k : {2u, 3u, 5u}) {
        for (std::uint64_t x : {1ull, 2ull, 97ull, 2000ull}) {
            CHECK(*sum_full(x, k, small_segments()).exact == direct_sum(x, k, 1, 1, SumMode::full));
            for (std::uint64_t q : {2ull, 6ull, 7ull, 12ull}) {
                CHECK(*sum_coprime(x, k, q, small_segments()).exact == direct_sum(x, k, q, 1, SumMode::coprime));
                for (std::uint64_t a = 1; a <= q; ++a) {
                    if (std::gcd(a, q) != 1) continue;
                    CHECK(*sum_progression(x, k, q, a, small_segments()).exact ==
                          direct_sum(x, k, q, a, SumMode::progression));
                }
            }
        }
    }
}

TEST_CASE("approx stays within its compensation bound of the exact value") {
    for (unsigned k : {2u, 4u, 8u}) {
        const auto r = sum_full(300'000, k);
        REQUIRE(r.exact);
        CHECK(std::fabs(static_cast<long double>(r.approx) - r.exact->to_long_double()) <= r.approx_error_bound);
        CHECK(r.approx_error_bound > 0);
    }
}

TEST_CASE("decomposition over residue classes, x <= 1e4, q <= 12") {
    for (unsigned k : {2u, 3u}) {
        const auto total = *sum_full(10'000, k).exact;
        for (std::uint64_t q = 1; q <= 12; ++q) {
            ExactRational parts(0);
            for (std::uint64_t a = 1; a <= q; ++a) {
                if (std::gcd(a, q) == 1) parts += *sum_progression(10'000, k, q, a).exact;
            }
            for (std::uint64_t n = 1; n <= 10'000; ++n) {
                if (std::gcd(n, q) > 1) parts += Dk(n, k);
            }
            REQUIRE(parts == total);
        }
    }
}

TEST_CASE("hyperbola identity: coprime sum = sum_d g_k(d) * phi(x/d, q)") {
    for (unsigned k : {2u, 3u}) {
        const DivisorParams params(k);
        for (std::uint64_t x : {1ull, 10ull, 100ull, 1000ull, 10'000ull}) {
            for (std::uint64_t q = 1; q <= 12; ++q) {
                ExactRational rhs(0);
                for (std::uint64_t d : powerful_numbers_up_to(x)) {
                    if (std::gcd(d, q) != 1) continue;
                    rhs += g_k(factorize(d), params) * ExactRational(static_cast<i128>(legendre_totient(x / d, q)));
                }
                REQUIRE(*sum_coprime(x, k, q).exact == rhs);
            }
        }
    }
}

TEST_CASE("sum_at: one pass gives every grid point, nondecreasing in x") {
    const std::vector<std::uint64_t> grid = {1, 10, 11, 500, 4096, 4097, 20'000};
    for (SumMode mode : {SumMode::full, SumMode::coprime, SumMode::progression}) {
        const SumRequest req{.x = 1, .k = 3, .q = 7, .a = 3, .mode = mode};
        const auto rows = sum_at(req, grid, small_segments(2));
        REQUIRE(rows.size() == grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            auto single = req;
            single.x = grid[i];
            CHECK(rows[i].request.x == grid[i]);
            CHECK(*rows[i].exact == *sum(single).exact);
            if (i > 0) CHECK(*rows[i - 1].exact <= *rows[i].exact);
        }
    }
    const std::vector<std::uint64_t> bad = {10, 10};
    CHECK_THROWS_AS(sum_at(SumRequest{}, bad), DomainError);
}

TEST_CASE("results are identical across segment sizes and worker counts") {
    const auto reference = sum_progression(1'000'000, 4, 9, 7);
    for (std::uint64_t seg : {1000ull, 65'536ull, 1'000'000ull}) {
        for (unsigned w : {1u, 3u, 8u}) {
            SieveOptions o;
            o.segment_size = seg;
            o.workers = w;
            const auto r = sum_progression(1'000'000, 4, 9, 7, o);
            CHECK(*r.exact == *reference.exact);
            CHECK(r.approx == reference.approx);
            CHECK(r.main_term == reference.main_term);
        }
    }
}

TEST_CASE("residue_class_sums partition the full sum") {
    const auto classes = residue_class_sums(5000, 3, 10, small_segments(2));
    ExactRational total(0);
    for (std::uint64_t r = 0; r < 10; ++r) total += *classes.exact[r];
    CHECK(total == *sum_full(5000, 3).exact);
    CHECK(*classes.exact[3] == *sum_progression(5000, 3, 10, 3).exact);
}

TEST_CASE("sum_abs_g_k") {
    // 13 powerful n in (1, 100]; 36, 72 and 100 have two prime factors.
    CHECK(sum_abs_g_k(100, 2) == ExactRational(27, 4));
    for (unsigned k : {2u, 3u, 6u}) CHECK(sum_abs_g_k(3, k) == ExactRational(1));
    for (unsigned k : {2u, 3u, 4u}) {
        ExactRational oracle(0);
        for (std::uint64_t n = 1; n <= 3000; ++n) oracle += g_k_by_inversion(n, DivisorParams(k)).abs();
        CHECK(sum_abs_g_k(3000, k) == oracle);
    }
}

TEST_CASE("sum_g_over_d") {
    CHECK(*sum_g_over_d(3, 2).exact == ExactRational(1));
    ExactRational oracle(0);
    for (std::uint64_t n = 1; n <= 100; ++n) {
        oracle += g_k_by_inversion(n, DivisorParams(2)) / ExactRational(static_cast<i128>(n));
    }
    const auto s = sum_g_over_d(100, 2);
    REQUIRE(s.exact);
    CHECK(*s.exact == oracle);
    CHECK(s.approx == doctest::Approx(oracle.to_double()).epsilon(1e-15));

    // Converges to G_{k,q}(1) with a tail of order x^(-1/2).
    const auto big = sum_g_over_d(1'000'000, 2);
    CHECK(std::fabs(big.approx - compute_G_kq1(1, 2).value) < 1e-3);
    const auto coprime = sum_g_over_d(1'000'000, 3, 6);
    CHECK(std::fabs(coprime.approx - compute_G_kq1(6, 3).value) < 2e-3);
}

TEST_CASE("coprime residual stays O(x^0.55), k=3, q=6") {
    std::vector<double> normalized;
    for (std::uint64_t x : {10'000ull, 100'000ull, 1'000'000ull}) {
        const auto r = sum_coprime(x, 3, 6);
        normalized.push_back(std::fabs(r.residual) / std::pow(static_cast<double>(x), 0.55));
    }
    const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
    CHECK(*hi / *lo <= 3.0);
}
