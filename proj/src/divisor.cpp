#include "dkap/divisor.hpp"

#include <string>
#include <vector>

#include "dkap/errors.hpp"

namespace dkap {

DivisorParams::DivisorParams(unsigned k) : k_(k) {
    if (k < 2 || k > kMaxPiltzOrder) {
        throw DomainError("Piltz order k must lie in [2, " + std::to_string(kMaxPiltzOrder) + "], got " +
                          std::to_string(k));
    }
}

u128 d_k_prime_power(unsigned k, unsigned m) { return binomial(std::uint64_t{k} + m - 1, m); }

namespace {

u128 checked_product(u128 a, u128 b, const char* what) {
    u128 r;
    if (!checked_mul(a, b, r)) throw ArithmeticError(std::string(what) + ": result exceeds 128 bits");
    return r;
}

i128 to_signed(u128 v, const char* what) {
    if (v >> 127) throw ArithmeticError(std::string(what) + ": result exceeds 127 bits");
    return static_cast<i128>(v);
}

// prod over p^m || n of C(k+m-1, m), for any k >= 1.
u128 piltz(const Factorization& f, unsigned k) {
    u128 r = 1;
    for (const auto& pm : f.factors()) r = checked_product(r, d_k_prime_power(k, pm.m), "d_k");
    return r;
}

u128 power(u128 base, unsigned e, const char* what) {
    u128 r = 1;
    for (unsigned i = 0; i < e; ++i) r = checked_product(r, base, what);
    return r;
}

}  // namespace

u128 d_k(const Factorization& f, DivisorParams params) { return piltz(f, params.k()); }

u128 d_star(const Factorization& f, DivisorParams params) { return power(params.k(), omega(f), "d_star"); }

ExactRational D_k(const Factorization& f, DivisorParams params) {
    return {to_signed(d_k(f, params), "D_k"), to_signed(d_star(f, params), "D_k")};
}

ExactRational g_k(const Factorization& f, DivisorParams params) {
    if (!is_powerful(f)) return ExactRational(0);
    // ((k-1)/k)^w * d_{k-1}(n)/(k-1)^w collapses to d_{k-1}(n)/k^w; D_1 == 1 covers k = 2.
    const unsigned k = params.k();
    return {to_signed(piltz(f, k - 1), "g_k"), to_signed(power(k, omega(f), "g_k"), "g_k")};
}

ExactRational g_k_by_inversion(std::uint64_t n, DivisorParams params) {
    const auto f = factorize(n);
    // Enumerate divisors as exponent vectors.
    const auto factors = f.factors();
    std::vector<unsigned> e(factors.size(), 0);
    ExactRational total(0);
    while (true) {
        std::vector<PrimePower> d_factors;
        int mu = 1;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (e[i] > 0) d_factors.push_back({factors[i].p, e[i]});
            const unsigned rest = factors[i].m - e[i];
            if (rest >= 2) mu = 0;
            if (rest == 1) mu = -mu;
        }
        if (mu != 0) {
            const auto dk = D_k(Factorization(std::move(d_factors)), params);
            total += (mu > 0) ? dk : -dk;
        }
        std::size_t i = 0;
        while (i < e.size() && e[i] == factors[i].m) e[i++] = 0;
        if (i == e.size()) break;
        ++e[i];
    }
    return total;
}

}  // namespace dkap
