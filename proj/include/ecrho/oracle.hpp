#pragma once

// Brute-force discrete-log reference: walks T = [k]P incrementally for
// k = 1..n and returns the first k with T == Q. Used as the independent
// check for every solver output at desk scale.

#include <cstdint>
#include <optional>

#include "ecrho/curve.hpp"

namespace ecrho::oracle {

// Empty optional: no k in [1, n] matches, so Q is not in <P>.
inline std::optional<std::uint64_t> brute_force_log(const curve::GroupContext& ctx) {
    curve::Point t = ctx.P;
    for (std::uint64_t k = 1; k <= ctx.n; ++k) {
        if (t == ctx.Q) return k;
        t = curve::add(t, ctx.P, ctx.curve);
    }
    return std::nullopt;
}

} // namespace ecrho::oracle
