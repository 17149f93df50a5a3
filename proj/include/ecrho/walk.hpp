#pragma once

// The rho walk: x-thirds partition of the group into S1/S2/S3, the
// iteration function f, and the (a, b) exponent recurrences. Every state
// satisfies the walk invariant R = [a]P (+) [b]Q.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecrho/curve.hpp"

namespace ecrho::walk {

using curve::GroupContext;
using curve::Point;

// Partition by x-coordinate thirds of [0, p) with exact integer
// comparisons. O is assigned to S1, so f(O) = P and the walk cannot get
// stuck at the identity.
struct PartitionRule {
    std::uint64_t p;

    int index(const Point& pt) const {
        if (pt.is_infinity) return 1;
        std::uint64_t t = 3 * pt.x;
        if (t < p) return 1;
        if (t < 2 * p) return 2;
        return 3;
    }
};

inline int partition_index(const Point& pt, const PartitionRule& rule) {
    return rule.index(pt);
}

struct WalkState {
    Point R;
    std::uint64_t a; // mod n
    std::uint64_t b; // mod n
    std::uint64_t step = 0; // applications of f; R_0 is step 0

    bool operator==(const WalkState&) const = default;
};

inline WalkState start_state(std::uint64_t a0, std::uint64_t b0, const GroupContext& ctx) {
    if (a0 < 1 || a0 > ctx.n - 1 || b0 < 1 || b0 > ctx.n - 1)
        throw std::domain_error("a0, b0 must lie in [1, n-1]");
    Point r = curve::add(curve::scalar_mul(a0, ctx.P, ctx.curve),
                         curve::scalar_mul(b0, ctx.Q, ctx.curve), ctx.curve);
    return WalkState{r, a0, b0, 0};
}

inline WalkState step(const WalkState& s, const GroupContext& ctx, const PartitionRule& rule) {
    WalkState next = s;
    switch (rule.index(s.R)) {
    case 1: // R + P, a + 1
        next.R = curve::add(s.R, ctx.P, ctx.curve);
        next.a = modular::mod_add(s.a, 1, ctx.n);
        break;
    case 2: // [2]R, 2a, 2b
        next.R = curve::add(s.R, s.R, ctx.curve);
        next.a = modular::mod_mul(2, s.a, ctx.n);
        next.b = modular::mod_mul(2, s.b, ctx.n);
        break;
    default: // R + Q, b + 1
        next.R = curve::add(s.R, ctx.Q, ctx.curve);
        next.b = modular::mod_add(s.b, 1, ctx.n);
        break;
    }
    next.step = s.step + 1;
    return next;
}

// Test-mode check of R == [a]P (+) [b]Q by direct scalar multiplication.
inline bool invariant_holds(const WalkState& s, const GroupContext& ctx) {
    Point expect = curve::add(curve::scalar_mul(s.a, ctx.P, ctx.curve),
                              curve::scalar_mul(s.b, ctx.Q, ctx.curve), ctx.curve);
    return expect == s.R;
}

// Trace row in the shape of the worked tables: (i, x|"inf", y|"inf", a, b).
struct TraceRow {
    std::uint64_t i;
    Point R;
    std::uint64_t a;
    std::uint64_t b;

    bool operator==(const TraceRow&) const = default;
};

inline std::vector<TraceRow> trace(std::uint64_t a0, std::uint64_t b0,
                                   const GroupContext& ctx, std::uint64_t steps) {
    PartitionRule rule{ctx.curve.p};
    std::vector<TraceRow> rows;
    WalkState s = start_state(a0, b0, ctx);
    rows.push_back({s.step, s.R, s.a, s.b});
    for (std::uint64_t i = 0; i < steps; ++i) {
        s = step(s, ctx, rule);
        rows.push_back({s.step, s.R, s.a, s.b});
    }
    return rows;
}

inline std::string coord_str(const Point& pt, bool x_coord) {
    if (pt.is_infinity) return "inf";
    return std::to_string(x_coord ? pt.x : pt.y);
}

inline std::string row_csv(const TraceRow& r) {
    return std::to_string(r.i) + "," + coord_str(r.R, true) + "," + coord_str(r.R, false) +
           "," + std::to_string(r.a) + "," + std::to_string(r.b);
}

} // namespace ecrho::walk
