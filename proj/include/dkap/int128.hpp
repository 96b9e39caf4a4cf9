#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dkap {

using i128 = __int128;
using u128 = unsigned __int128;

std::string to_string(i128 v);
std::string to_string(u128 v);

// Parses an optionally signed decimal integer; nullopt on malformed input or overflow.
std::optional<i128> parse_i128(std::string_view s);

u128 gcd_u128(u128 a, u128 b);

inline u128 abs_u128(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

// Overflow-checked helpers; return false instead of wrapping.
inline bool checked_mul(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }
inline bool checked_add(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }
inline bool checked_mul(u128 a, u128 b, u128& out) { return !__builtin_mul_overflow(a, b, &out); }
inline bool checked_add(u128 a, u128 b, u128& out) { return !__builtin_add_overflow(a, b, &out); }

}  // namespace dkap
