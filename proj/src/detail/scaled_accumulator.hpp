#pragma once

#include <array>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <optional>

#include "dkap/int128.hpp"
#include "dkap/rational.hpp"

namespace dkap::detail {

// omega(n) <= 15 for every n < 2^64.
inline constexpr unsigned kMaxOmega = 15;

// Sum of numerators bucketed by omega: the value is sum_w bucket[w] / k^w.
class ScaledAccumulator {
public:
    void add(std::uint64_t num, unsigned w) {
        if (__builtin_add_overflow(buckets_[w], u128{num}, &buckets_[w])) {
            overflow_ = true;
            spill_ += static_cast<long double>(num) / std::pow(static_cast<long double>(k_), w);
        }
    }

    void set_k(unsigned k) { k_ = k; }

    void merge(const ScaledAccumulator& o) {
        for (unsigned w = 0; w <= kMaxOmega; ++w) {
            if (__builtin_add_overflow(buckets_[w], o.buckets_[w], &buckets_[w])) {
                overflow_ = true;
                spill_ += static_cast<long double>(o.buckets_[w]) / std::pow(static_cast<long double>(k_), w);
            }
        }
        overflow_ |= o.overflow_;
        spill_ += o.spill_;
    }

    std::optional<ExactRational> exact() const {
        if (overflow_) return std::nullopt;
        try {
            ExactRational total(0);
            i128 kw = 1;
            for (unsigned w = 0; w <= max_omega(); ++w) {
                if (w > 0 && !checked_mul(kw, i128{k_}, kw)) return std::nullopt;
                if (buckets_[w] == 0) continue;
                if (buckets_[w] >> 127) return std::nullopt;
                total += ExactRational(static_cast<i128>(buckets_[w]), kw);
            }
            return total;
        } catch (const ArithmeticError&) {
            return std::nullopt;
        }
    }

    // Neumaier sum of bucket[w] / k^w plus any spilled mass.
    double approx() const {
        long double s = 0, c = 0;
        auto add = [&](long double v) {
            const long double t = s + v;
            c += std::fabs(s) >= std::fabs(v) ? (s - t) + v : (v - t) + s;
            s = t;
        };
        long double kw = 1;
        for (unsigned w = 0; w <= max_omega(); ++w) {
            if (w > 0) kw *= k_;
            if (buckets_[w] != 0) add(static_cast<long double>(buckets_[w]) / kw);
        }
        add(spill_);
        return static_cast<double>(s + c);
    }

    // Every term is nonnegative; each contributes a handful of roundings.
    double error_bound() const {
        const double rel = (max_omega() + 6) * DBL_EPSILON;
        return rel * std::fabs(approx()) + (overflow_ ? LDBL_EPSILON * static_cast<double>(spill_) * 4 : 0.0);
    }

    unsigned max_omega() const {
        unsigned w = kMaxOmega;
        while (w > 0 && buckets_[w] == 0) --w;
        return w;
    }

private:
    std::array<u128, kMaxOmega + 1> buckets_{};
    unsigned k_ = 2;
    bool overflow_ = false;
    long double spill_ = 0;
};

}  // namespace dkap::detail
