#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dkap/euler.hpp"
#include "dkap/int128.hpp"
#include "dkap/rational.hpp"

namespace dkap {

enum class SumMode { full, coprime, progression };

std::string_view to_string(SumMode mode);

struct SumRequest {
    std::uint64_t x = 1;
    unsigned k = 2;
    std::uint64_t q = 1;
    std::uint64_t a = 1;
    SumMode mode = SumMode::full;

    // Throws DomainError: x >= 1, valid k, q >= 1, and for progressions
    // 1 <= a <= q with gcd(a, q) = 1.
    void validate() const;
};

struct SieveOptions {
    std::uint64_t segment_size = std::uint64_t{1} << 22;
    unsigned workers = 0;  // 0: hardware concurrency
    EulerOptions euler{};
};

struct SumResult {
    SumRequest request;
    std::optional<ExactRational> exact;  // absent when the exact accumulator overflowed
    double approx = 0;
    double approx_error_bound = 0;  // |approx - exact| <= this
    double main_term = 0;
    double residual = 0;  // approx - main_term
};

// D_k(n) = numerator / k^omega for every n in [start, start + size).
struct DkSegment {
    std::uint64_t start;
    std::span<const std::uint64_t> numerators;  // d_k(n)
    std::span<const std::uint8_t> omegas;
};

// Ordered, single-threaded stream of segments covering [1, x].
void for_each_D_k_segment(std::uint64_t x, unsigned k, const std::function<void(const DkSegment&)>& visit,
                          std::uint64_t segment_size = SieveOptions{}.segment_size);

// Ordered stream of (n, D_k(n)) for n = 1..x.
void bulk_D_k(std::uint64_t x, unsigned k, const std::function<void(std::uint64_t, const ExactRational&)>& visit,
              std::uint64_t segment_size = SieveOptions{}.segment_size);
std::vector<ExactRational> bulk_D_k_values(std::uint64_t x, unsigned k);

SumResult sum_full(std::uint64_t x, unsigned k, const SieveOptions& opts = {});
SumResult sum_coprime(std::uint64_t x, unsigned k, std::uint64_t q, const SieveOptions& opts = {});
SumResult sum_progression(std::uint64_t x, unsigned k, std::uint64_t q, std::uint64_t a,
                          const SieveOptions& opts = {});
SumResult sum(const SumRequest& request, const SieveOptions& opts = {});

// One sieve pass to max(grid); one SumResult per grid point (grid must be
// strictly increasing). request.x is ignored.
std::vector<SumResult> sum_at(const SumRequest& request, std::span<const std::uint64_t> grid,
                              const SieveOptions& opts = {});

// Main term for a request: A_k x, G_k(q) x or (G_k(q)/phi(q)) x.
double main_term_coefficient(const SumRequest& request, const EulerOptions& opts = {});

// Sums of D_k(n) over n <= x split by residue r = n mod q (index r).
struct ResidueClassSums {
    std::uint64_t x = 0;
    unsigned k = 2;
    std::uint64_t q = 1;
    std::vector<std::optional<ExactRational>> exact;
    std::vector<double> approx;
};
ResidueClassSums residue_class_sums(std::uint64_t x, unsigned k, std::uint64_t q, const SieveOptions& opts = {});

// Sum of |g_k(n)| over n <= x, via the 2-full support.
ExactRational sum_abs_g_k(std::uint64_t x, unsigned k);

// Sum of g_k(n)/n over n <= x with gcd(n, q) = 1. The exact value is dropped
// once denominators leave 128 bits; approx is always filled.
struct AuxSum {
    std::optional<ExactRational> exact;
    double approx = 0;
};
AuxSum sum_g_over_d(std::uint64_t x, unsigned k, std::uint64_t q = 1);

}  // namespace dkap
