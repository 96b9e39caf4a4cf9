#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dkap/arith.hpp"
#include "dkap/errors.hpp"

using namespace dkap;

TEST_CASE("sieve_spf: small tables") {
    const auto t = sieve_spf(10);
    const std::uint64_t expected[] = {2, 3, 2, 5, 2, 7, 2, 3, 2};
    for (std::uint64_t n = 2; n <= 10; ++n) CHECK(t.spf(n) == expected[n - 2]);
    CHECK(sieve_spf(2).spf(2) == 2);
    CHECK(sieve_spf(49).spf(49) == 7);
}

TEST_CASE("sieve_spf: entries are prime divisors, fixed exactly at primes") {
    const auto t = sieve_spf(5000);
    const auto primes = primes_up_to(5000);
    std::vector<bool> is_prime(5001, false);
    for (auto p : primes) is_prime[p] = true;
    for (std::uint64_t n = 2; n <= 5000; ++n) {
        CHECK(n % t.spf(n) == 0);
        CHECK(is_prime[t.spf(n)]);
        CHECK((t.spf(n) == n) == is_prime[n]);
    }
}

TEST_CASE("sieve_spf: budget and domain errors") {
    CHECK_THROWS_AS(sieve_spf(1), DomainError);
    CHECK_THROWS_AS(sieve_spf(1000, 100), ResourceError);
    try {
        sieve_spf(1000, 100);
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("budget of 100") != std::string::npos);
    }
}

TEST_CASE("factorize: examples") {
    CHECK(omega(factorize(1)) == 0);
    CHECK(omega(factorize(360)) == 3);
    const auto f = factorize(360);
    CHECK(f.factors()[0] == PrimePower{2, 3});
    CHECK(f.factors()[1] == PrimePower{3, 2});
    CHECK(f.factors()[2] == PrimePower{5, 1});
    const auto p = factorize(97);
    CHECK(p.factors().size() == 1);
    CHECK(p.factors()[0] == PrimePower{97, 1});
    CHECK_THROWS_AS(factorize(0), DomainError);
    CHECK_THROWS_AS(factorize(11, sieve_spf(10)), DomainError);
}

TEST_CASE("factorize: reconstructs n for n <= 1e5, with and without a table") {
    const auto t = sieve_spf(100'000);
    for (std::uint64_t n = 1; n <= 100'000; ++n) {
        const auto a = factorize(n, t);
        std::uint64_t prod = 1;
        std::uint64_t prev = 1;
        for (const auto& [p, m] : a.factors()) {
            CHECK(p > prev);
            prev = p;
            for (unsigned i = 0; i < m; ++i) prod *= p;
        }
        REQUIRE(prod == n);
        if (n % 97 == 0) CHECK(omega(factorize(n)) == a.factors().size());
    }
    CHECK(omega(factorize(999'999'999'989ull)) == 1);  // a 12-digit prime
}

TEST_CASE("omega and mobius agree with a direct sieve for n <= 1e4") {
    constexpr std::uint64_t N = 10'000;
    std::vector<int> mu(N + 1, 1), om(N + 1, 0);
    std::vector<bool> composite(N + 1, false);
    for (std::uint64_t p = 2; p <= N; ++p) {
        if (composite[p]) continue;
        for (std::uint64_t j = p; j <= N; j += p) {
            if (j > p) composite[j] = true;
            mu[j] = -mu[j];
            ++om[j];
        }
        for (std::uint64_t j = p * p; j <= N; j += p * p) mu[j] = 0;
    }
    for (std::uint64_t n = 1; n <= N; ++n) {
        const auto f = factorize(n);
        REQUIRE(mobius(f) == mu[n]);
        REQUIRE(omega(f) == static_cast<unsigned>(om[n]));
    }
    CHECK(omega(factorize(1)) == 0);
    CHECK(omega(factorize(12)) == 2);
    CHECK(omega(factorize(30030)) == 6);
    CHECK(mobius(factorize(1)) == 1);
    CHECK(mobius(factorize(6)) == 1);
    CHECK(mobius(factorize(12)) == 0);
}

TEST_CASE("binomial") {
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(9, 4) == 126);
    CHECK(binomial(17, 0) == 1);
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(128, 64) == (binomial(127, 63) + binomial(127, 64)));
    CHECK_THROWS_AS(binomial(3, 4), DomainError);
    CHECK_THROWS_AS(binomial(200, 100), ArithmeticError);
}

TEST_CASE("legendre_totient: examples and brute force agreement") {
    CHECK(legendre_totient(std::uint64_t{10}, 1) == 10);
    CHECK(legendre_totient(std::uint64_t{10}, 3) == 7);
    CHECK(legendre_totient(std::uint64_t{100}, 6) == 33);
    CHECK(legendre_totient(10.7, 3) == 7);
    CHECK(legendre_totient(0.5, 3) == 0);
    for (std::uint64_t q = 1; q <= 50; ++q) {
        std::uint64_t count = 0;
        for (std::uint64_t x = 0; x <= 1000; ++x) {
            if (x > 0 && std::gcd(x, q) == 1) ++count;
            REQUIRE(legendre_totient(x, q) == count);
        }
    }
}

TEST_CASE("is_powerful") {
    CHECK(is_powerful(factorize(1)));
    CHECK(is_powerful(factorize(72)));
    CHECK_FALSE(is_powerful(factorize(12)));
}

TEST_CASE("powerful_numbers_up_to: examples and brute-force scan") {
    CHECK(powerful_numbers_up_to(1) == std::vector<std::uint64_t>{1});
    CHECK(powerful_numbers_up_to(10) == std::vector<std::uint64_t>{1, 4, 8, 9});
    CHECK(powerful_numbers_up_to(100) ==
          std::vector<std::uint64_t>{1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72, 81, 100});
    std::vector<std::uint64_t> brute;
    for (std::uint64_t n = 1; n <= 200'000; ++n) {
        if (is_powerful(factorize(n))) brute.push_back(n);
    }
    CHECK(powerful_numbers_up_to(200'000) == brute);
}

TEST_CASE("powerful counts: frozen values and sqrt growth") {
    // Counts of 2-full n <= 10^j from the brute-force scan above extended to 10^6.
    CHECK(powerful_numbers_up_to(10'000).size() == 185);
    CHECK(powerful_numbers_up_to(100'000).size() == 619);
    CHECK(powerful_numbers_up_to(1'000'000).size() == 2027);
    // The ratio count/sqrt(t) climbs toward zeta(3/2)/zeta(3) = 2.1733 from below.
    double prev = 0;
    for (std::uint64_t t : {100ull, 10'000ull, 1'000'000ull, 100'000'000ull}) {
        const double r = static_cast<double>(powerful_numbers_up_to(t).size()) / std::sqrt(static_cast<double>(t));
        CHECK(r > prev);
        CHECK(r < 2.1733);
        prev = r;
    }
}

TEST_CASE("euler_phi, isqrt, icbrt") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(9) == 6);
    CHECK(euler_phi(100) == 40);
    for (std::uint64_t n : {0ull, 1ull, 15ull, 16ull, 17ull, 999'999'999'999ull, ~0ull}) {
        const auto r = isqrt(n);
        CHECK(static_cast<unsigned __int128>(r) * r <= n);
        CHECK(static_cast<unsigned __int128>(r + 1) * (r + 1) > n);
        const auto c = icbrt(n);
        CHECK(static_cast<unsigned __int128>(c) * c * c <= n);
        CHECK(static_cast<unsigned __int128>(c + 1) * (c + 1) * (c + 1) > n);
    }
}
