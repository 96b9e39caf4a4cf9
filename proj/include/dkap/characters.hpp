#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dkap/sieve.hpp"

namespace dkap {

struct ComplexValue {
    double re = 0;
    double im = 0;

    double abs() const { return std::hypot(re, im); }
    friend bool operator==(const ComplexValue&, const ComplexValue&) = default;
};

// exp(2 pi i exponent / order), or 0.
struct RootOfUnity {
    bool zero = false;
    std::uint64_t exponent = 0;
    std::uint64_t order = 1;

    ComplexValue render() const;
};

struct Generator {
    std::uint64_t residue;  // generator of (Z/qZ)* via CRT
    std::uint64_t order;
    friend bool operator==(const Generator&, const Generator&) = default;
};

namespace detail {
struct GroupTables;
}

class Character {
public:
    std::uint64_t q() const;
    std::size_t index() const { return index_; }
    std::span<const std::uint64_t> exponents() const { return exponents_; }
    bool is_principal() const { return principal_; }
    // Order shared by every value: the exponent (lcm of generator orders) of the group.
    std::uint64_t value_order() const;

    RootOfUnity value(std::int64_t n) const;
    // Exponent e of chi(r) = exp(2 pi i e / value_order()) for r = 0..q-1;
    // kNonUnit where gcd(r, q) > 1.
    std::vector<std::uint64_t> exponent_table() const;
    static constexpr std::uint64_t kNonUnit = ~std::uint64_t{0};

private:
    friend class CharacterGroup;
    std::shared_ptr<const detail::GroupTables> tables_;
    std::size_t index_ = 0;
    std::vector<std::uint64_t> exponents_;
    bool principal_ = false;
};

// All phi(q) Dirichlet characters mod q, enumerated lexicographically over
// exponent vectors (last generator varies fastest). Index 0 is principal.
class CharacterGroup {
public:
    explicit CharacterGroup(std::uint64_t q);

    std::uint64_t q() const;
    std::uint64_t phi() const;
    std::uint64_t exponent() const;
    std::span<const Generator> generators() const;
    std::span<const Character> characters() const { return characters_; }
    const Character& operator[](std::size_t i) const { return characters_.at(i); }
    std::size_t size() const { return characters_.size(); }

    // Index of the conjugate character.
    std::size_t conjugate_index(std::size_t i) const;

private:
    std::shared_ptr<const detail::GroupTables> tables_;
    std::vector<Character> characters_;
};

CharacterGroup character_group(std::uint64_t q);

ComplexValue char_value(const Character& chi, std::int64_t n);

// (1/phi(q)) sum_chi conj(chi(a)) chi(n). Throws DomainError if gcd(a, q) != 1.
double orthogonality_indicator(std::uint64_t q, std::int64_t a, std::int64_t n);
double orthogonality_indicator(const CharacterGroup& group, std::int64_t a, std::int64_t n);

// sum_{m <= y} chi(m), accumulated as counts per root-of-unity exponent.
ComplexValue char_partial_sum(const Character& chi, std::uint64_t y);

// sum_{n <= x} chi(n) D_k(n).
ComplexValue twisted_sum(const Character& chi, std::uint64_t x, unsigned k, const SieveOptions& opts = {});
// Same, from residue-class sums already computed for chi's modulus.
ComplexValue twisted_sum(const Character& chi, const ResidueClassSums& classes);

// (1/phi(q)) sum_chi conj(chi(a)) S_chi(x). Throws DomainError if gcd(a, q) != 1
// and NumericalError if the imaginary part exceeds 1e-8 relative.
double ap_sum_via_characters(std::uint64_t x, unsigned k, std::uint64_t q, std::uint64_t a,
                             const SieveOptions& opts = {});
double ap_sum_via_characters(const CharacterGroup& group, const ResidueClassSums& classes, std::uint64_t a);

// max over non-principal chi mod q and y <= q of |sum_{m<=y} chi(m)| / (sqrt(q) log q).
double pv_ratio(std::uint64_t q);

}  // namespace dkap
