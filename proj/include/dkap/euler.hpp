#pragma once

#include <cstdint>

namespace dkap {

inline constexpr std::uint64_t kDefaultPrimeLimit = 1'000'000;

// Truncated Euler product over primes <= prime_limit. The omitted factors
// change log(value) by at most tail_bound.
struct EulerProductValue {
    double value = 0;
    std::uint64_t prime_limit = 0;  // largest prime actually included
    double tail_bound = 0;
    unsigned k = 0;
    std::uint64_t q = 1;

    double relative_error_bound() const;
};

struct EulerOptions {
    std::uint64_t prime_limit = kDefaultPrimeLimit;
    // Switch to the p^-2, p^-3 expansion once (1 - 1/p)^-k - 1 drops below this.
    double series_threshold = 1e-8;
};

// (1 - 1/p)(1 - 1/k + (1/k)(1 - 1/p)^-k).
double local_factor_A(std::uint64_t p, unsigned k, double series_threshold = EulerOptions{}.series_threshold);
double log_local_factor_A(std::uint64_t p, unsigned k, double series_threshold = EulerOptions{}.series_threshold);

EulerProductValue compute_A_k(unsigned k, const EulerOptions& opts = {});
// A_k * prod_{p | q} k / (k - 1 + (1 - 1/p)^-k).
EulerProductValue compute_G_k(std::uint64_t q, unsigned k, const EulerOptions& opts = {});
// A_k * prod_{p | q} k / ((1 - 1/p)(k - 1 + (1 - 1/p)^-k)); equals (q/phi(q)) G_k(q).
EulerProductValue compute_G_kq1(std::uint64_t q, unsigned k, const EulerOptions& opts = {});
// G_k(q) / phi(q): the leading coefficient of the sum of D_k over n = a (mod q).
double ap_leading_coefficient(std::uint64_t q, unsigned k, const EulerOptions& opts = {});

// Finite correction factors used above, exposed for reuse with a cached A_k.
double coprime_correction(std::uint64_t q, unsigned k);
double coprime_correction_at_one(std::uint64_t q, unsigned k);

}  // namespace dkap
