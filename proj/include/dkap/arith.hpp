#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dkap/int128.hpp"

namespace dkap {

// Entries are 64-bit, so the default budget of 2^26 entries is 512 MiB.
inline constexpr std::uint64_t kDefaultSpfBudget = std::uint64_t{1} << 26;

// Smallest-prime-factor table for [2, limit]. Immutable after construction.
class SpfTable {
public:
    std::uint64_t limit() const { return limit_; }
    std::uint64_t spf(std::uint64_t n) const { return spf_[n]; }
    std::span<const std::uint64_t> entries() const { return spf_; }

private:
    friend SpfTable sieve_spf(std::uint64_t limit, std::uint64_t budget);
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> spf_;
};

// Throws DomainError for limit < 2, ResourceError when limit + 1 > budget.
SpfTable sieve_spf(std::uint64_t limit, std::uint64_t budget = kDefaultSpfBudget);

// All primes <= limit, ascending (plain Eratosthenes over a byte array).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

struct PrimePower {
    std::uint64_t p;
    unsigned m;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

class Factorization {
public:
    Factorization() = default;
    // Validates that primes strictly increase and exponents are positive;
    // n is recomputed from the factors.
    explicit Factorization(std::vector<PrimePower> factors);

    std::uint64_t n() const { return n_; }
    std::span<const PrimePower> factors() const& { return factors_; }
    std::span<const PrimePower> factors() const&& = delete;

private:
    std::uint64_t n_ = 1;
    std::vector<PrimePower> factors_;
};

// Trial division by 2, 3 and 6k +- 1 up to sqrt(n). Throws DomainError for n = 0.
Factorization factorize(std::uint64_t n);
// Table lookup; throws DomainError for n = 0 or n > table.limit().
Factorization factorize(std::uint64_t n, const SpfTable& table);

unsigned omega(const Factorization& f);
int mobius(const Factorization& f);
bool is_powerful(const Factorization& f);

// Exact C(a, b); throws ArithmeticError if the value leaves 128 bits and
// DomainError if b > a.
u128 binomial(std::uint64_t a, std::uint64_t b);

// Euler's totient via factorization.
std::uint64_t euler_phi(std::uint64_t q);

// #{1 <= m <= x : gcd(m, q) = 1}, by inclusion-exclusion over squarefree d | q.
std::uint64_t legendre_totient(double x, std::uint64_t q);
std::uint64_t legendre_totient(std::uint64_t x, std::uint64_t q);

// Sorted 2-full integers <= t (1 included), from n = a^2 b^3 with b squarefree.
std::vector<std::uint64_t> powerful_numbers_up_to(std::uint64_t t);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
// floor(sqrt(n)) and floor(cbrt(n)) exactly.
std::uint64_t isqrt(std::uint64_t n);
std::uint64_t icbrt(std::uint64_t n);

}  // namespace dkap
