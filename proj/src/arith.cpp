#include "dkap/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "dkap/errors.hpp"

namespace dkap {

SpfTable sieve_spf(std::uint64_t limit, std::uint64_t budget) {
    if (limit < 2) throw DomainError("sieve_spf: limit must be >= 2");
    if (limit >= budget) {
        throw ResourceError("sieve_spf: limit " + std::to_string(limit) + " exceeds the SPF memory budget of " +
                            std::to_string(budget) + " entries");
    }
    SpfTable t;
    t.limit_ = limit;
    t.spf_.assign(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.spf_[i] != 0) continue;
        t.spf_[i] = i;
        if (i > limit / i) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) {
            if (t.spf_[j] == 0) t.spf_[j] = i;
        }
    }
    return t;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<std::uint8_t> composite(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        if (i > limit / i) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    return primes;
}

Factorization::Factorization(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
    std::uint64_t prev = 1;
    n_ = 1;
    for (const auto& [p, m] : factors_) {
        if (p <= prev || m == 0) throw DomainError("Factorization: primes must increase and exponents be positive");
        prev = p;
        for (unsigned i = 0; i < m; ++i) {
            if (__builtin_mul_overflow(n_, p, &n_)) throw ArithmeticError("Factorization: value exceeds 64 bits");
        }
    }
}

Factorization factorize(std::uint64_t n) {
    if (n == 0) throw DomainError("factorize: n must be positive");
    std::vector<PrimePower> out;
    auto strip = [&](std::uint64_t p) {
        unsigned m = 0;
        while (n % p == 0) {
            n /= p;
            ++m;
        }
        if (m != 0) out.push_back({p, m});
    };
    strip(2);
    strip(3);
    for (std::uint64_t p = 5; p <= n / p; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) out.push_back({n, 1});
    return Factorization(std::move(out));
}

Factorization factorize(std::uint64_t n, const SpfTable& table) {
    if (n == 0) throw DomainError("factorize: n must be positive");
    if (n > table.limit()) throw DomainError("factorize: n exceeds the SPF table limit");
    std::vector<PrimePower> out;
    while (n > 1) {
        const std::uint64_t p = table.spf(n);
        unsigned m = 0;
        while (n % p == 0) {
            n /= p;
            ++m;
        }
        out.push_back({p, m});
    }
    return Factorization(std::move(out));
}

unsigned omega(const Factorization& f) { return static_cast<unsigned>(f.factors().size()); }

int mobius(const Factorization& f) {
    for (const auto& pm : f.factors()) {
        if (pm.m >= 2) return 0;
    }
    return (f.factors().size() % 2 == 0) ? 1 : -1;
}

bool is_powerful(const Factorization& f) {
    return std::all_of(f.factors().begin(), f.factors().end(), [](const PrimePower& pm) { return pm.m >= 2; });
}

u128 binomial(std::uint64_t a, std::uint64_t b) {
    if (b > a) throw DomainError("binomial: b > a");
    b = std::min(b, a - b);
    // r = C(a - b + i, i) after step i; each step's division is exact.
    u128 r = 1;
    for (std::uint64_t i = 1; i <= b; ++i) {
        const u128 num = a - b + i;
        const u128 g = gcd_u128(r, i);
        const u128 r_red = r / g;
        const u128 i_red = i / g;
        // i_red divides num because C(a-b+i, i) is an integer and gcd(r_red, i_red) = 1.
        u128 out;
        if (!checked_mul(r_red, num / i_red, out)) throw ArithmeticError("binomial: result exceeds 128 bits");
        r = out;
    }
    return r;
}

std::uint64_t euler_phi(std::uint64_t q) {
    if (q == 0) throw DomainError("euler_phi: q must be positive");
    std::uint64_t phi = q;
    const auto fq = factorize(q);
    for (const auto& pm : fq.factors()) phi = phi / pm.p * (pm.p - 1);
    return phi;
}

std::uint64_t legendre_totient(std::uint64_t x, std::uint64_t q) {
    if (q == 0) throw DomainError("legendre_totient: q must be positive");
    const auto f = factorize(q);
    const auto primes = f.factors();
    const std::size_t r = primes.size();
    std::int64_t total = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
        std::uint64_t d = 1;
        for (std::size_t i = 0; i < r; ++i) {
            if (mask >> i & 1) d *= primes[i].p;
        }
        const auto term = static_cast<std::int64_t>(x / d);
        total += (std::popcount(mask) % 2 == 0) ? term : -term;
    }
    return static_cast<std::uint64_t>(total);
}

std::uint64_t legendre_totient(double x, std::uint64_t q) {
    if (!(x >= 0)) return 0;
    return legendre_totient(static_cast<std::uint64_t>(std::floor(x)), q);
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && (r > n / r)) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

std::uint64_t icbrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
    auto cube_le = [n](std::uint64_t v) { return v == 0 || (v <= n / v && v * v <= n / v); };
    while (r > 0 && !cube_le(r)) --r;
    while (cube_le(r + 1)) ++r;
    return r;
}

std::vector<std::uint64_t> powerful_numbers_up_to(std::uint64_t t) {
    if (t == 0) throw DomainError("powerful_numbers_up_to: t must be positive");
    const std::uint64_t bmax = icbrt(t);
    // Squarefree flags for b <= t^(1/3).
    std::vector<std::uint8_t> squarefree(bmax + 1, 1);
    for (std::uint64_t d = 2; d * d <= bmax; ++d) {
        for (std::uint64_t j = d * d; j <= bmax; j += d * d) squarefree[j] = 0;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t b = 1; b <= bmax; ++b) {
        if (!squarefree[b]) continue;
        const std::uint64_t b3 = b * b * b;
        const std::uint64_t amax = isqrt(t / b3);
        for (std::uint64_t a = 1; a <= amax; ++a) out.push_back(a * a * b3);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace dkap
