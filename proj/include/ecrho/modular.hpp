#pragma once

// Modular integer arithmetic for small moduli (field prime p and group
// order n, which may be composite). All values are plain uint64_t kept
// reduced into [0, m). The supported modulus bound is m < 2^32 so that
// (m - 1)^2 fits in uint64_t without overflow.

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace ecrho::modular {

inline constexpr std::uint64_t kMaxModulus = (std::uint64_t{1} << 32) - 1;

inline void require_modulus(std::uint64_t m) {
    if (m < 2) throw std::invalid_argument("modulus must be >= 2");
    if (m > kMaxModulus) throw std::invalid_argument("modulus exceeds supported bound (2^32 - 1)");
}

inline std::uint64_t mod_add(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
    return (x + y) % m;
}

inline std::uint64_t mod_sub(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
    return (x + m - y % m) % m;
}

inline std::uint64_t mod_mul(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
    return (x * y) % m;
}

// Reduce a possibly negative integer into [0, m).
inline std::uint64_t reduce_signed(std::int64_t v, std::uint64_t m) {
    std::int64_t sm = static_cast<std::int64_t>(m);
    std::int64_t r = v % sm;
    if (r < 0) r += sm;
    return static_cast<std::uint64_t>(r);
}

struct ExtGcd {
    std::uint64_t g;
    std::int64_t u; // u*x + v*y == g
    std::int64_t v;
};

inline ExtGcd ext_gcd(std::uint64_t x, std::uint64_t y) {
    if (x == 0 && y == 0) throw std::invalid_argument("gcd(0, 0) undefined");
    std::int64_t old_r = static_cast<std::int64_t>(x), r = static_cast<std::int64_t>(y);
    std::int64_t old_u = 1, u = 0;
    std::int64_t old_v = 0, v = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t t = old_r - q * r; old_r = r; r = t;
        t = old_u - q * u; old_u = u; u = t;
        t = old_v - q * v; old_v = v; v = t;
    }
    return {static_cast<std::uint64_t>(old_r), old_u, old_v};
}

inline std::uint64_t gcd(std::uint64_t x, std::uint64_t y) {
    while (y != 0) { std::uint64_t t = x % y; x = y; y = t; }
    return x;
}

// Empty optional means NotInvertible: gcd(x, m) != 1. Never throws for
// in-range inputs; the caller decides whether a failed inversion aborts
// or merely skips a collision (n may be composite).
inline std::optional<std::uint64_t> mod_inv(std::uint64_t x, std::uint64_t m) {
    ExtGcd e = ext_gcd(x % m, m);
    if (e.g != 1) return std::nullopt;
    return reduce_signed(e.u, m);
}

// num * den^-1 mod m with signed inputs (quotients like (-1 - a)/b).
inline std::optional<std::uint64_t> mod_div(std::int64_t num, std::int64_t den, std::uint64_t m) {
    std::uint64_t n = reduce_signed(num, m);
    std::uint64_t d = reduce_signed(den, m);
    auto inv = mod_inv(d, m);
    if (!inv) return std::nullopt;
    return mod_mul(n, *inv, m);
}

} // namespace ecrho::modular
