#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>

namespace privup {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// Number of length-`len` words within Hamming distance `radius` of a fixed
// word: sum of C(len, i) for i = 0..radius.
inline BigInt ball_size(std::uint64_t len, std::uint64_t radius) {
    BigInt total = 0;
    if (radius > len) radius = len;
    for (std::uint64_t i = 0; i <= radius; ++i) total += binomial(len, i);
    return total;
}

inline bool is_power_of_two(const BigInt& x) {
    if (x <= 0) return false;
    return (x & (x - 1)) == 0;
}

// Smallest t with 2^t >= x, for x >= 1.
inline unsigned ceil_log2(const BigInt& x) {
    if (x < 1) throw std::invalid_argument("ceil_log2: argument must be positive");
    if (x == 1) return 0;
    unsigned floor_log = boost::multiprecision::msb(x);
    return is_power_of_two(x) ? floor_log : floor_log + 1;
}

// Bits needed to index an arbitrary point of the radius-f ball around the
// stale copy; this is the syndrome length every bounded-flip code uses.
inline unsigned lbar_ceil(std::uint64_t len, std::uint64_t max_flips) {
    return ceil_log2(ball_size(len, max_flips));
}

// Classic replicated-PIR capacity: (1 + 1/N + ... + 1/N^(K-1))^-1.
inline Rational pir_capacity(std::uint64_t databases, std::uint64_t messages) {
    if (databases < 2) throw std::invalid_argument("pir_capacity: at least two databases required");
    if (messages < 1) throw std::invalid_argument("pir_capacity: at least one message required");
    BigInt nk = boost::multiprecision::pow(BigInt(databases), static_cast<unsigned>(messages));
    BigInt nk1 = nk / databases;
    return Rational(nk1 * (BigInt(databases) - 1), nk - 1);
}

struct BoundsReport {
    unsigned databases = 0;       // N
    unsigned messages = 0;        // K
    unsigned message_len = 0;     // L
    unsigned max_flips = 0;       // f
    unsigned lbar_ceil = 0;       // ceil(log2(ball))
    std::uint64_t lower = 0;      // download floor, in bits
    std::uint64_t upper = 0;      // achievable download, in bits
    std::uint64_t naive = 0;      // full private retrieval of one message
    std::uint64_t gap = 0;        // upper - lower
    bool tight = false;           // lower == upper
};

namespace detail {

inline std::uint64_t to_u64(const BigInt& x) {
    if (x < 0 || x > BigInt(UINT64_MAX)) throw std::overflow_error("bounds: value out of range");
    return static_cast<std::uint64_t>(x);
}

inline BigInt ceil_div(const BigInt& a, const BigInt& b) { return (a + b - 1) / b; }

}  // namespace detail

// Exact download bounds for privately updating one of K messages of
// `message_len` bits when the local copy is stale in at most `max_flips`
// positions. All arithmetic is integral; no floating point is involved.
inline BoundsReport compute_bounds(unsigned databases, unsigned messages, unsigned message_len,
                                   unsigned max_flips) {
    if (databases < 2) throw std::invalid_argument("compute_bounds: at least two databases required");
    if (messages < 2) throw std::invalid_argument("compute_bounds: at least two messages required");
    if (max_flips > message_len) throw std::invalid_argument("compute_bounds: max_flips exceeds message length");

    BigInt nk = boost::multiprecision::pow(BigInt(databases), messages);
    BigInt u = nk - 1;                   // N^K - 1
    BigInt v = nk - nk / databases;      // N^K - N^(K-1)
    BigInt ball = ball_size(message_len, max_flips);
    unsigned lbar = ceil_log2(ball);

    BoundsReport rep;
    rep.databases = databases;
    rep.messages = messages;
    rep.message_len = message_len;
    rep.max_flips = max_flips;
    rep.lbar_ceil = lbar;

    // lower = min { D : 2^(D*v) >= ball^u }, evaluated without logs: the
    // smallest M with 2^M >= ball^u is ceil_log2(ball^u), then round up to a
    // multiple of v.
    std::uint64_t exp = detail::to_u64(u);
    if (exp > 1000000) throw std::overflow_error("compute_bounds: parameter range too large");
    BigInt ball_pow = boost::multiprecision::pow(ball, static_cast<unsigned>(exp));
    BigInt min_bits = ceil_log2(ball_pow);
    rep.lower = detail::to_u64(detail::ceil_div(min_bits, v));
    rep.upper = detail::to_u64(detail::ceil_div(BigInt(lbar) * u, v));
    rep.naive = detail::to_u64(detail::ceil_div(BigInt(message_len) * u, v));
    rep.gap = rep.upper - rep.lower;
    rep.tight = rep.lower == rep.upper;
    return rep;
}

}  // namespace privup
