#pragma once

#include <grovetree/errors.hpp>

#include <cstdint>
#include <limits>
#include <string>

namespace grovetree {

/// Signed 128-bit integer used for Wiener-type sums.
using Int128 = __int128;

inline constexpr Int128 kInt128Max = static_cast<Int128>((~static_cast<unsigned __int128>(0)) >> 1);

inline Int128 checked_add(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit addition overflow");
    return r;
}

inline Int128 checked_sub(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("128-bit subtraction overflow");
    return r;
}

inline Int128 checked_mul(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit multiplication overflow");
    return r;
}

inline std::string to_string(Int128 value) {
    if (value == 0) return "0";
    const bool negative = value < 0;
    // Work in unsigned space so the minimum value negates cleanly.
    unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(value + 1)) + 1
                                     : static_cast<unsigned __int128>(value);
    std::string digits;
    while (mag != 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(mag % 10)));
        mag /= 10;
    }
    return negative ? "-" + digits : digits;
}

inline double to_double(Int128 value) { return static_cast<double>(value); }

/// Narrow to int64, throwing if the value does not fit.
inline std::int64_t narrow_i64(Int128 value) {
    if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min())
        throw OverflowError("value does not fit in 64 bits: " + to_string(value));
    return static_cast<std::int64_t>(value);
}

}  // namespace grovetree
