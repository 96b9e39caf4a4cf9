#pragma once

#include <cstdint>

#include "dkap/arith.hpp"
#include "dkap/rational.hpp"

namespace dkap {

inline constexpr unsigned kMaxPiltzOrder = 64;

// The Piltz order k, 2 <= k <= kMaxPiltzOrder.
class DivisorParams {
public:
    explicit DivisorParams(unsigned k);
    unsigned k() const { return k_; }

private:
    unsigned k_;
};

// d_k(n) = prod C(k+m-1, m) over p^m || n.
u128 d_k(const Factorization& f, DivisorParams params);
// k^omega(n).
u128 d_star(const Factorization& f, DivisorParams params);
// d_k(n) / k^omega(n), reduced; equals prod C(k+m-1, m)/k over p^m || n.
ExactRational D_k(const Factorization& f, DivisorParams params);

// Dirichlet-convolution kernel with D_k = g_k * 1. Multiplicative, supported
// on 1 and 2-full n, with g_k(p^m) = ((k-1)/k) D_{k-1}(p^m) for m >= 2, so
// g_k(n) = d_{k-1}(n) / k^omega(n) on 2-full n and g_k(1) = 1.
ExactRational g_k(const Factorization& f, DivisorParams params);

// Oracle: sum over d | n of D_k(d) mu(n/d), by explicit divisor enumeration.
ExactRational g_k_by_inversion(std::uint64_t n, DivisorParams params);

// d_k for k >= 1 on a single prime power; C(k+m-1, m).
u128 d_k_prime_power(unsigned k, unsigned m);

}  // namespace dkap
