#include "dkap/rational.hpp"

#include <algorithm>
#include <bit>

#include "dkap/errors.hpp"

namespace dkap {

std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

std::string to_string(i128 v) {
    if (v >= 0) return to_string(static_cast<u128>(v));
    return "-" + to_string(abs_u128(v));
}

std::optional<i128> parse_i128(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;
    // Accumulate the magnitude in u128 so that the most negative value parses.
    const u128 limit = neg ? u128(1) << 127 : (u128(1) << 127) - 1;
    u128 v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        const u128 digit = static_cast<u128>(c - '0');
        if (v > (limit - digit) / 10) return std::nullopt;
        v = v * 10 + digit;
    }
    return neg ? static_cast<i128>(u128(0) - v) : static_cast<i128>(v);
}

u128 gcd_u128(u128 a, u128 b) {
    if (a == 0) return b;
    if (b == 0) return a;
    auto ctz = [](u128 v) {
        const auto lo = static_cast<std::uint64_t>(v);
        return lo != 0 ? std::countr_zero(lo) : 64 + std::countr_zero(static_cast<std::uint64_t>(v >> 64));
    };
    const int shift = ctz(a | b);
    a >>= ctz(a);
    do {
        b >>= ctz(b);
        if (a > b) std::swap(a, b);
        b -= a;
    } while (b != 0);
    return a << shift;
}

namespace {

[[noreturn]] void overflow(const char* op) {
    throw ArithmeticError(std::string("ExactRational overflow in ") + op);
}

i128 mul(i128 a, i128 b, const char* op) {
    i128 r;
    if (!checked_mul(a, b, r)) overflow(op);
    return r;
}

i128 add(i128 a, i128 b, const char* op) {
    i128 r;
    if (!checked_add(a, b, r)) overflow(op);
    return r;
}

constexpr i128 kMin = static_cast<i128>(u128(1) << 127);

}  // namespace

ExactRational::ExactRational(i128 num) : num_(num), den_(1) {}

ExactRational::ExactRational(i128 num, i128 den) {
    if (den == 0) throw DomainError("ExactRational with zero denominator");
    if (num == kMin || den == kMin) overflow("construction");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const auto g = static_cast<i128>(gcd_u128(abs_u128(num), static_cast<u128>(den)));
    num_ = num / g;
    den_ = den / g;
}

ExactRational ExactRational::operator-() const {
    if (num_ == kMin) overflow("negation");
    ExactRational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

ExactRational ExactRational::abs() const { return num_ < 0 ? -*this : *this; }

ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    if (a.den_ == b.den_) return {add(a.num_, b.num_, "addition"), a.den_};
    const auto g = static_cast<i128>(gcd_u128(static_cast<u128>(a.den_), static_cast<u128>(b.den_)));
    const i128 bd = b.den_ / g;
    const i128 num = add(mul(a.num_, bd, "addition"), mul(b.num_, a.den_ / g, "addition"), "addition");
    // gcd(num, g) is the only common factor left to remove before forming the denominator.
    const auto g2 = static_cast<i128>(gcd_u128(abs_u128(num), static_cast<u128>(g)));
    ExactRational r;
    r.num_ = num / g2;
    r.den_ = mul(a.den_ / g2, bd, "addition");
    const auto g3 = static_cast<i128>(gcd_u128(abs_u128(r.num_), static_cast<u128>(r.den_)));
    r.num_ /= g3;
    r.den_ /= g3;
    return r;
}

ExactRational operator-(const ExactRational& a, const ExactRational& b) { return a + (-b); }

ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    // Cross-cancel first so intermediate products stay as small as possible.
    const auto g1 = static_cast<i128>(gcd_u128(abs_u128(a.num_), static_cast<u128>(b.den_)));
    const auto g2 = static_cast<i128>(gcd_u128(abs_u128(b.num_), static_cast<u128>(a.den_)));
    ExactRational r;
    if (a.num_ == 0 || b.num_ == 0) return r;
    r.num_ = mul(a.num_ / g1, b.num_ / g2, "multiplication");
    r.den_ = mul(a.den_ / g2, b.den_ / g1, "multiplication");
    return r;
}

ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.num_ == 0) throw DomainError("ExactRational division by zero");
    ExactRational inv;
    if (b.num_ < 0) {
        if (b.num_ == kMin) overflow("division");
        inv.num_ = -b.den_;
        inv.den_ = -b.num_;
    } else {
        inv.num_ = b.den_;
        inv.den_ = b.num_;
    }
    return a * inv;
}

std::strong_ordering operator<=>(const ExactRational& a, const ExactRational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    // Sign first, then compare magnitudes with the overflow-checked product;
    // fall back to long double only when the cross products do not fit.
    i128 l, r;
    if (checked_mul(a.num_, b.den_, l) && checked_mul(b.num_, a.den_, r)) return l <=> r;
    const long double x = a.to_long_double(), y = b.to_long_double();
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    overflow("comparison");
}

long double ExactRational::to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
}

std::string ExactRational::str() const {
    if (den_ == 1) return to_string(num_);
    return to_string(num_) + "/" + to_string(den_);
}

ExactRational ExactRational::parse(std::string_view text) {
    const auto slash = text.find('/');
    const auto num = parse_i128(text.substr(0, slash));
    if (!num) throw DomainError("malformed rational: " + std::string(text));
    if (slash == std::string_view::npos) return ExactRational(*num);
    const auto den = parse_i128(text.substr(slash + 1));
    if (!den) throw DomainError("malformed rational: " + std::string(text));
    return {*num, *den};
}

}  // namespace dkap
