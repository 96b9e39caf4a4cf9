#include "dkap/euler.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "dkap/arith.hpp"
#include "dkap/divisor.hpp"
#include "dkap/errors.hpp"

namespace dkap {

double EulerProductValue::relative_error_bound() const { return std::expm1(tail_bound); }

namespace {

// log((1 - 1/p)^-k).
double minus_k_log1m(std::uint64_t p, unsigned k) { return -static_cast<double>(k) * std::log1p(-1.0 / static_cast<double>(p)); }

// Deterministic chunked sum of per-prime logs: fixed-size chunks, each
// Kahan-compensated, combined in order.
double sum_log_factors(const std::vector<std::uint64_t>& primes, unsigned k, double threshold) {
    constexpr std::size_t kChunk = 4096;
    double total = 0, total_c = 0;
    for (std::size_t start = 0; start < primes.size(); start += kChunk) {
        const std::size_t end = std::min(primes.size(), start + kChunk);
        double s = 0, c = 0;
        for (std::size_t i = start; i < end; ++i) {
            const double y = log_local_factor_A(primes[i], k, threshold) - c;
            const double t = s + y;
            c = (t - s) - y;
            s = t;
        }
        const double y = s - total_c;
        const double t = total + y;
        total_c = (t - total) - y;
        total = t;
    }
    return total;
}

struct PrimeCache {
    std::mutex mu;
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;
};

std::vector<std::uint64_t> cached_primes(std::uint64_t limit) {
    static PrimeCache cache;
    std::lock_guard lock(cache.mu);
    if (cache.limit < limit) {
        cache.primes = primes_up_to(limit);
        cache.limit = limit;
    }
    auto end = std::upper_bound(cache.primes.begin(), cache.primes.end(), limit);
    return {cache.primes.begin(), end};
}

}  // namespace

double log_local_factor_A(std::uint64_t p, unsigned k, double series_threshold) {
    if (p < 2) throw DomainError("local_factor_A: p must be prime");
    if (k < 2) throw DomainError("local_factor_A: k must be >= 2");
    const double u = std::expm1(minus_k_log1m(p, k));  // (1 - 1/p)^-k - 1
    if (u < series_threshold) {
        const double z = 1.0 / static_cast<double>(p);
        const double kd = k;
        return std::log1p(z * z * ((kd - 1) / 2 + z * (kd + 1) * (kd - 1) / 6));
    }
    return std::log1p(-1.0 / static_cast<double>(p)) + std::log1p(u / k);
}

double local_factor_A(std::uint64_t p, unsigned k, double series_threshold) {
    return std::exp(log_local_factor_A(p, k, series_threshold));
}

EulerProductValue compute_A_k(unsigned k, const EulerOptions& opts) {
    DivisorParams{k};
    if (opts.prime_limit < 2) throw DomainError("compute_A_k: prime_limit must be >= 2");
    const auto primes = cached_primes(opts.prime_limit);
    EulerProductValue v;
    v.k = k;
    v.q = 1;
    v.prime_limit = primes.back();
    v.value = std::exp(sum_log_factors(primes, k, opts.series_threshold));
    // sum_{p > P} log(1 + (k-1)/2 p^-2 + ...) <= (k-1)/2 * sum_{p > P} p^-2 ~ (k-1)/(2 P log P); doubled.
    const double P = static_cast<double>(opts.prime_limit);
    v.tail_bound = 2.0 * (k - 1) / (2.0 * P * std::log(P));
    return v;
}

double coprime_correction(std::uint64_t q, unsigned k) {
    if (q == 0) throw DomainError("q must be positive");
    double r = 1;
    const auto fq = factorize(q);
    for (const auto& pm : fq.factors()) {
        const double pow_mk = std::exp(minus_k_log1m(pm.p, k));
        r *= static_cast<double>(k) / (k - 1 + pow_mk);
    }
    return r;
}

double coprime_correction_at_one(std::uint64_t q, unsigned k) {
    if (q == 0) throw DomainError("q must be positive");
    double r = 1;
    const auto fq = factorize(q);
    for (const auto& pm : fq.factors()) {
        const double pow_mk = std::exp(minus_k_log1m(pm.p, k));
        const double one_minus = 1.0 - 1.0 / static_cast<double>(pm.p);
        r *= static_cast<double>(k) / (one_minus * (k - 1 + pow_mk));
    }
    return r;
}

EulerProductValue compute_G_k(std::uint64_t q, unsigned k, const EulerOptions& opts) {
    auto v = compute_A_k(k, opts);
    v.value *= coprime_correction(q, k);
    v.q = q;
    return v;
}

EulerProductValue compute_G_kq1(std::uint64_t q, unsigned k, const EulerOptions& opts) {
    auto v = compute_A_k(k, opts);
    v.value *= coprime_correction_at_one(q, k);
    v.q = q;
    return v;
}

double ap_leading_coefficient(std::uint64_t q, unsigned k, const EulerOptions& opts) {
    return compute_G_k(q, k, opts).value / static_cast<double>(euler_phi(q));
}

}  // namespace dkap
