#pragma once

// Affine short-Weierstrass group arithmetic over F_p: y^2 = x^3 + ax + b.
// Desk-scale only: p < 2^32, primality by trial division, O(p) point
// enumeration. All functions are pure; validation happens at construction
// so the group operations may assume their inputs are on the curve.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ecrho/modular.hpp"

namespace ecrho::curve {

using modular::mod_add;
using modular::mod_mul;
using modular::mod_sub;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

struct CurveParams {
    std::uint64_t p;
    std::uint64_t a;
    std::uint64_t b;

    CurveParams(std::uint64_t p_, std::uint64_t a_, std::uint64_t b_)
        : p(p_), a(a_ % p_), b(b_ % p_) {
        modular::require_modulus(p);
        if (p == 2 || !is_prime(p))
            throw std::invalid_argument("p must be an odd prime");
        // 4a^3 + 27b^2 != 0 (mod p)
        std::uint64_t a3 = mod_mul(mod_mul(a, a, p), a, p);
        std::uint64_t b2 = mod_mul(b, b, p);
        std::uint64_t disc = mod_add(mod_mul(4, a3, p), mod_mul(27, b2, p), p);
        if (disc == 0)
            throw std::invalid_argument("singular curve: 4a^3 + 27b^2 == 0 (mod p)");
    }

    bool operator==(const CurveParams&) const = default;
};

struct Point {
    // Infinity is encoded as (is_infinity=true); coordinates then unused.
    bool is_infinity = true;
    std::uint64_t x = 0;
    std::uint64_t y = 0;

    static Point infinity() { return Point{}; }
    static Point affine(std::uint64_t x, std::uint64_t y) { return Point{false, x, y}; }

    bool operator==(const Point&) const = default;
};

inline bool is_on_curve(const Point& pt, const CurveParams& c) {
    if (pt.is_infinity) return true;
    if (pt.x >= c.p || pt.y >= c.p) return false;
    std::uint64_t lhs = mod_mul(pt.y, pt.y, c.p);
    std::uint64_t rhs = mod_add(mod_mul(mod_mul(pt.x, pt.x, c.p), pt.x, c.p),
                                mod_add(mod_mul(c.a, pt.x, c.p), c.b, c.p), c.p);
    return lhs == rhs;
}

inline Point negate(const Point& pt, const CurveParams& c) {
    if (pt.is_infinity) return pt;
    return Point::affine(pt.x, pt.y == 0 ? 0 : c.p - pt.y);
}

inline Point add(const Point& p1, const Point& p2, const CurveParams& c) {
    if (p1.is_infinity) return p2;
    if (p2.is_infinity) return p1;
    if (p1.x == p2.x && mod_add(p1.y, p2.y, c.p) == 0)
        return Point::infinity(); // inverse pair, covers the y == 0 doubling case
    std::uint64_t lambda;
    if (p1 == p2) {
        // tangent: (3x^2 + a) / 2y
        std::uint64_t num = mod_add(mod_mul(3, mod_mul(p1.x, p1.x, c.p), c.p), c.a, c.p);
        std::uint64_t den = mod_mul(2, p1.y, c.p);
        lambda = mod_mul(num, *modular::mod_inv(den, c.p), c.p);
    } else {
        // chord: (y2 - y1) / (x2 - x1)
        std::uint64_t num = mod_sub(p2.y, p1.y, c.p);
        std::uint64_t den = mod_sub(p2.x, p1.x, c.p);
        lambda = mod_mul(num, *modular::mod_inv(den, c.p), c.p);
    }
    std::uint64_t x3 = mod_sub(mod_sub(mod_mul(lambda, lambda, c.p), p1.x, c.p), p2.x, c.p);
    std::uint64_t y3 = mod_sub(mod_mul(lambda, mod_sub(p1.x, x3, c.p), c.p), p1.y, c.p);
    return Point::affine(x3, y3);
}

inline Point scalar_mul(std::uint64_t s, const Point& pt, const CurveParams& c) {
    Point acc = Point::infinity();
    Point base = pt;
    while (s != 0) {
        if (s & 1) acc = add(acc, base, c);
        base = add(base, base, c);
        s >>= 1;
    }
    return acc;
}

// Smallest n <= bound with [n]pt == O, by repeated addition.
inline std::optional<std::uint64_t> order_of(const Point& pt, const CurveParams& c,
                                             std::uint64_t bound) {
    if (bound < 1) throw std::invalid_argument("order bound must be >= 1");
    Point t = pt;
    for (std::uint64_t n = 1; n <= bound; ++n) {
        if (t.is_infinity) return n;
        t = add(t, pt, c);
    }
    return std::nullopt;
}

// All points including O, O first, then sorted by (x, y).
inline std::vector<Point> enumerate_points(const CurveParams& c) {
    std::vector<Point> pts;
    pts.push_back(Point::infinity());
    for (std::uint64_t x = 0; x < c.p; ++x) {
        std::uint64_t rhs = mod_add(mod_mul(mod_mul(x, x, c.p), x, c.p),
                                    mod_add(mod_mul(c.a, x, c.p), c.b, c.p), c.p);
        if (rhs == 0) {
            pts.push_back(Point::affine(x, 0));
            continue;
        }
        // p odd, so y < p - y for y <= p/2 and the pair comes out sorted
        for (std::uint64_t y = 1; y <= c.p / 2; ++y) {
            if (mod_mul(y, y, c.p) == rhs) {
                pts.push_back(Point::affine(x, y));
                pts.push_back(Point::affine(x, c.p - y));
                break;
            }
        }
    }
    return pts;
}

struct GroupContext {
    CurveParams curve;
    Point P; // generator
    Point Q; // target, Q = [k]P for the unknown k
    std::uint64_t n; // ord(P)

    GroupContext(CurveParams c, Point gen, Point target, std::uint64_t order)
        : curve(c), P(gen), Q(target), n(order) {
        if (!is_on_curve(P, curve) || P.is_infinity)
            throw std::invalid_argument("P must be a finite point on the curve");
        if (!is_on_curve(Q, curve))
            throw std::invalid_argument("Q must be on the curve");
        modular::require_modulus(n);
        if (!scalar_mul(n, P, curve).is_infinity)
            throw std::invalid_argument("[n]P != O: n is not a multiple of ord(P)");
        // Membership of Q in <P> is assumed; the solvers verify k post-hoc.
    }
};

} // namespace ecrho::curve
