#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "dkap/int128.hpp"

namespace dkap {

// Reduced fraction num/den with den >= 1. Every operation is exact; results
// that do not fit 128-bit parts throw ArithmeticError.
class ExactRational {
public:
    constexpr ExactRational() = default;
    ExactRational(i128 num);  // NOLINT(google-explicit-constructor)
    ExactRational(i128 num, i128 den);

    i128 num() const { return num_; }
    i128 den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    ExactRational operator-() const;
    ExactRational abs() const;

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b);
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b);

    ExactRational& operator+=(const ExactRational& o) { return *this = *this + o; }
    ExactRational& operator-=(const ExactRational& o) { return *this = *this - o; }
    ExactRational& operator*=(const ExactRational& o) { return *this = *this * o; }
    ExactRational& operator/=(const ExactRational& o) { return *this = *this / o; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b);

    long double to_long_double() const;
    double to_double() const { return static_cast<double>(to_long_double()); }

    // "num/den", or just "num" when den == 1.
    std::string str() const;
    // Accepts "num", "num/den" (den may be unreduced, must be nonzero).
    static ExactRational parse(std::string_view text);

private:
    i128 num_ = 0;
    i128 den_ = 1;
};

}  // namespace dkap
