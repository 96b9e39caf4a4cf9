#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dkap/arith.hpp"
#include "dkap/characters.hpp"
#include "dkap/errors.hpp"
#include "dkap/sieve.hpp"

using namespace dkap;

namespace {

bool near(const ComplexValue& a, const ComplexValue& b, double tol = 1e-12) {
    return std::fabs(a.re - b.re) <= tol && std::fabs(a.im - b.im) <= tol;
}

ComplexValue mul(const ComplexValue& a, const ComplexValue& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

}  // namespace

TEST_CASE("group sizes and generator structure") {
    for (std::uint64_t q = 1; q <= 200; ++q) {
        const CharacterGroup g(q);
        REQUIRE(g.size() == euler_phi(q));
        REQUIRE(g.phi() == euler_phi(q));
        CHECK(g[0].is_principal());
        std::uint64_t prod = 1;
        for (const auto& gen : g.generators()) {
            prod *= gen.order;
            CHECK(std::gcd(gen.residue, q) == 1);
        }
        CHECK(prod == g.phi());
    }
    const CharacterGroup g8(8);
    CHECK(g8.generators().size() == 2);
    CHECK(g8.exponent() == 2);
    CHECK(CharacterGroup(1).size() == 1);
}

TEST_CASE("characters mod 4 and mod 3") {
    const auto g4 = character_group(4);
    REQUIRE(g4.size() == 2);
    CHECK(char_value(g4[0], 3) == ComplexValue{1, 0});
    CHECK(char_value(g4[1], 1) == ComplexValue{1, 0});
    CHECK(char_value(g4[1], 3) == ComplexValue{-1, 0});
    CHECK(char_value(g4[1], 2) == ComplexValue{0, 0});
    CHECK(char_value(g4[1], -1) == ComplexValue{-1, 0});
    CHECK(g4[1].value(2).zero);

    const auto g3 = character_group(3);
    CHECK(char_value(g3[1], 2) == ComplexValue{-1, 0});
    CHECK(char_value(g3[1], 5) == ComplexValue{-1, 0});
    CHECK(char_value(g3[0], 6) == ComplexValue{0, 0});

    // Order-4 character mod 5 takes the exact values +-i.
    const auto g5 = character_group(5);
    const auto v = char_value(g5[1], 2);
    CHECK(((v == ComplexValue{0, 1}) || (v == ComplexValue{0, -1})));
}

TEST_CASE("complete multiplicativity, periodicity and conjugation") {
    for (std::uint64_t q = 1; q <= 200; q += (q < 60 ? 1 : 7)) {
        const CharacterGroup g(q);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto& chi = g[i];
            const auto& conj = g[g.conjugate_index(i)];
            for (std::int64_t m = 1; m <= 30; ++m) {
                REQUIRE(near(char_value(chi, m + static_cast<std::int64_t>(q)), char_value(chi, m)));
                const auto cv = char_value(conj, m);
                const auto v = char_value(chi, m);
                REQUIRE(near(cv, {v.re, -v.im}));
                for (std::int64_t n = 1; n <= 12; ++n) {
                    REQUIRE(near(char_value(chi, m * n), mul(v, char_value(chi, n))));
                }
            }
        }
    }
}

TEST_CASE("characters are distinct and close under products") {
    for (std::uint64_t q : {5ull, 8ull, 15ull, 16ull, 24ull, 35ull}) {
        const CharacterGroup g(q);
        std::vector<std::vector<std::uint64_t>> tables;
        for (const auto& chi : g.characters()) tables.push_back(chi.exponent_table());
        for (std::size_t i = 0; i < tables.size(); ++i) {
            for (std::size_t j = i + 1; j < tables.size(); ++j) CHECK(tables[i] != tables[j]);
        }
        const std::uint64_t L = g.exponent();
        for (std::size_t i = 0; i < tables.size(); ++i) {
            for (std::size_t j = 0; j < tables.size(); ++j) {
                std::vector<std::uint64_t> prod(q);
                for (std::uint64_t r = 0; r < q; ++r) {
                    prod[r] = tables[i][r] == Character::kNonUnit ? Character::kNonUnit : (tables[i][r] + tables[j][r]) % L;
                }
                CHECK(std::find(tables.begin(), tables.end(), prod) != tables.end());
            }
        }
    }
}

TEST_CASE("orthogonality indicator") {
    for (std::uint64_t q = 1; q <= 30; ++q) {
        const CharacterGroup g(q);
        for (std::int64_t a = 1; a <= static_cast<std::int64_t>(q); ++a) {
            if (std::gcd<std::uint64_t>(a, q) != 1) continue;
            for (std::int64_t n = 0; n < 2 * static_cast<std::int64_t>(q); ++n) {
                const double expected = (((n - a) % static_cast<std::int64_t>(q)) == 0) ? 1.0 : 0.0;
                REQUIRE(std::fabs(orthogonality_indicator(g, a, n) - expected) <= 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(orthogonality_indicator(4, 2, 1), DomainError);
}

TEST_CASE("character partial sums") {
    for (std::uint64_t q : {3ull, 4ull, 7ull, 12ull, 13ull}) {
        const CharacterGroup g(q);
        for (std::size_t i = 1; i < g.size(); ++i) {
            for (std::uint64_t c : {1ull, 2ull, 3ull}) CHECK(near(char_partial_sum(g[i], c * q), {0, 0}, 1e-9));
            ComplexValue direct{0, 0};
            for (std::uint64_t m = 1; m <= 2 * q + 5; ++m) {
                const auto v = char_value(g[i], static_cast<std::int64_t>(m));
                direct.re += v.re;
                direct.im += v.im;
                REQUIRE(near(char_partial_sum(g[i], m), direct, 1e-9));
            }
        }
    }
    CHECK(char_partial_sum(character_group(4)[0], 10) == ComplexValue{5, 0});
    CHECK(char_partial_sum(character_group(4)[1], 0) == ComplexValue{0, 0});
}

TEST_CASE("twisted sums") {
    const auto tw = twisted_sum(character_group(2)[0], 10, 2);
    CHECK(tw.re == doctest::Approx(5.5));
    CHECK(tw.im == 0);
    const auto t4 = twisted_sum(character_group(4)[1], 10, 2);
    // D_2(1) - D_2(3) + D_2(5) - D_2(7) + D_2(9) with D_2(9) = 3/2.
    CHECK(t4.re == doctest::Approx(1.5));
    CHECK(std::fabs(t4.im) < 1e-12);
    // Principal twist equals the coprime sum.
    const auto g9 = character_group(9);
    CHECK(twisted_sum(g9[0], 5000, 3).re == doctest::Approx(sum_coprime(5000, 3, 9).approx).epsilon(1e-14));
}

TEST_CASE("progression sums recovered from character sums") {
    CHECK(ap_sum_via_characters(10, 2, 3, 1) == doctest::Approx(4.5).epsilon(1e-12));
    for (auto [q, a] : {std::pair<std::uint64_t, std::uint64_t>{8, 5}, {7, 3}, {12, 11}, {15, 2}}) {
        const double via = ap_sum_via_characters(10'000, 3, q, a);
        const auto direct = sum_progression(10'000, 3, q, a);
        CHECK(via == doctest::Approx(direct.approx).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ap_sum_via_characters(100, 2, 4, 2), DomainError);
}

TEST_CASE("normalized Polya-Vinogradov ratio") {
    CHECK(pv_ratio(3) == doctest::Approx(1.0 / (std::sqrt(3.0) * std::log(3.0))).epsilon(1e-12));
    CHECK(pv_ratio(4) == doctest::Approx(1.0 / (2.0 * std::log(4.0))).epsilon(1e-12));
    for (std::uint64_t q = 3; q <= 60; ++q) {
        const double r = pv_ratio(q);
        CHECK(r > 0);
        CHECK(r <= 1.0);
    }
    CHECK_THROWS_AS(pv_ratio(2), DomainError);
    CHECK_THROWS_AS(pv_ratio(1), DomainError);
}
