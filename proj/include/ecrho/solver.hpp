#pragma once

// Collision detection and log extraction. The baseline solver is classic
// Pollard rho (full-store revisit detection or Floyd tortoise/hare, direct
// collisions only). The improved solver additionally tests every state
// against the five special points O, P, Q, -P, -Q and probes the visit
// store for negated matches (reverse collisions R_i = -R_j).

#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ecrho/walk.hpp"

namespace ecrho::solver {

using curve::GroupContext;
using curve::Point;
using walk::PartitionRule;
using walk::WalkState;

enum class CollisionType {
    SpecialO,
    SpecialP,
    SpecialQ,
    SpecialNegP,
    SpecialNegQ,
    Direct,
    Reverse,
};

inline const char* to_string(CollisionType t) {
    switch (t) {
    case CollisionType::SpecialO: return "special-O";
    case CollisionType::SpecialP: return "special-P";
    case CollisionType::SpecialQ: return "special-Q";
    case CollisionType::SpecialNegP: return "special-negP";
    case CollisionType::SpecialNegQ: return "special-negQ";
    case CollisionType::Direct: return "direct";
    case CollisionType::Reverse: return "reverse";
    }
    return "?";
}

struct CollisionKind {
    CollisionType type;
    // step indices for Direct/Reverse, i < j; unused for special kinds
    std::uint64_t i = 0;
    std::uint64_t j = 0;

    bool operator==(const CollisionKind&) const = default;
};

struct SolveResult {
    std::uint64_t k;
    CollisionKind kind;
    std::uint64_t steps_taken; // f applications up to detection, summed over restarts
    std::uint32_t restarts;
    std::uint64_t group_ops; // point additions + doublings, including start-point setup
    std::uint64_t a0; // start exponents of the successful attempt
    std::uint64_t b0;

    bool operator==(const SolveResult&) const = default;
};

// k = (a_i - a_j) / (b_j - b_i) mod n, for two states with equal R.
inline std::optional<std::uint64_t> extract_direct(std::uint64_t ai, std::uint64_t bi,
                                                   std::uint64_t aj, std::uint64_t bj,
                                                   std::uint64_t n) {
    return modular::mod_div(static_cast<std::int64_t>(ai) - static_cast<std::int64_t>(aj),
                            static_cast<std::int64_t>(bj) - static_cast<std::int64_t>(bi), n);
}

// k = (a_i + a_j) / (-b_i - b_j) mod n, for two states with R_i = -R_j.
inline std::optional<std::uint64_t> extract_reverse(std::uint64_t ai, std::uint64_t bi,
                                                    std::uint64_t aj, std::uint64_t bj,
                                                    std::uint64_t n) {
    return modular::mod_div(static_cast<std::int64_t>(ai) + static_cast<std::int64_t>(aj),
                            -static_cast<std::int64_t>(bi) - static_cast<std::int64_t>(bj), n);
}

inline bool verify(std::uint64_t k, const GroupContext& ctx) {
    return curve::scalar_mul(k, ctx.P, ctx.curve) == ctx.Q;
}

enum class SpecialOutcome { NoMatch, NotInvertible, Found };

struct SpecialResult {
    SpecialOutcome outcome;
    CollisionType type = CollisionType::SpecialO; // valid when outcome != NoMatch
    std::uint64_t k = 0;                          // valid when outcome == Found
};

struct SpecialMatch {
    CollisionType type;
    std::int64_t num;
    std::int64_t den;
};

// Matches R against O, P, Q, -P, -Q in that order and reports the
// corresponding quotient (n-a)/b, (1-a)/b, a/(1-b), (-1-a)/b, a/(-1-b).
inline std::optional<SpecialMatch> match_special(const WalkState& s, const GroupContext& ctx) {
    const auto n = static_cast<std::int64_t>(ctx.n);
    const auto a = static_cast<std::int64_t>(s.a);
    const auto b = static_cast<std::int64_t>(s.b);
    if (s.R.is_infinity) return SpecialMatch{CollisionType::SpecialO, n - a, b};
    if (s.R == ctx.P) return SpecialMatch{CollisionType::SpecialP, 1 - a, b};
    if (s.R == ctx.Q) return SpecialMatch{CollisionType::SpecialQ, a, 1 - b};
    if (s.R == curve::negate(ctx.P, ctx.curve))
        return SpecialMatch{CollisionType::SpecialNegP, -1 - a, b};
    if (s.R == curve::negate(ctx.Q, ctx.curve))
        return SpecialMatch{CollisionType::SpecialNegQ, a, -1 - b};
    return std::nullopt;
}

inline SpecialResult try_special_collision(const WalkState& s, const GroupContext& ctx) {
    auto m = match_special(s, ctx);
    if (!m) return {SpecialOutcome::NoMatch};
    auto k = modular::mod_div(m->num, m->den, ctx.n);
    if (!k) return {SpecialOutcome::NotInvertible, m->type};
    return {SpecialOutcome::Found, m->type, *k};
}

// Solves den * k == num (mod n) and returns the first solution with
// [k]P == Q. When d = gcd(den, n) > 1 the congruence pins k only mod n/d,
// leaving d candidates to test; for a genuine collision a solution always
// exists. This matters for even-order subgroups: around any walk cycle
// containing a doubling step, b_j == b_i (mod 2), so the plain quotient's
// gcd test fails on every revisit and restarting cannot escape. Candidate
// count is capped so a fully degenerate quotient (den == 0) stays cheap.
inline std::optional<std::uint64_t> resolve_collision_log(std::int64_t num, std::int64_t den,
                                                          const GroupContext& ctx,
                                                          std::uint64_t candidate_cap = 64) {
    const std::uint64_t n = ctx.n;
    std::uint64_t d = modular::reduce_signed(den, n);
    std::uint64_t m = modular::reduce_signed(num, n);
    if (d == 0) return std::nullopt;
    std::uint64_t g = modular::gcd(d, n);
    if (g > candidate_cap || m % g != 0) return std::nullopt;
    std::uint64_t n_red = n / g;
    auto inv = modular::mod_inv(d / g, n_red); // gcd(d/g, n/g) == 1 by construction
    if (!inv) return std::nullopt;
    std::uint64_t k0 = modular::mod_mul((m / g) % n_red, *inv, n_red);
    for (std::uint64_t t = 0; t < g; ++t) {
        std::uint64_t k = k0 + t * n_red;
        if (verify(k, ctx)) return k;
    }
    return std::nullopt;
}

// Index from visited points to their exponent records. Lookup by x finds
// both the exact match (same y) and the negated match (y' = p - y) in one
// probe. Entries are append-only.
class VisitStore {
public:
    struct Entry {
        std::uint64_t y;
        std::uint64_t a;
        std::uint64_t b;
        std::uint64_t step;
        int walker = 0;
    };

    void insert(const Point& pt, std::uint64_t a, std::uint64_t b, std::uint64_t step,
                int walker = 0) {
        if (pt.is_infinity) {
            infinity_.push_back({0, a, b, step, walker});
        } else {
            by_x_[pt.x].push_back({pt.y, a, b, step, walker});
        }
    }

    const Entry* find_exact(const Point& pt) const {
        if (pt.is_infinity)
            return infinity_.empty() ? nullptr : &infinity_.front();
        auto it = by_x_.find(pt.x);
        if (it == by_x_.end()) return nullptr;
        for (const Entry& e : it->second)
            if (e.y == pt.y) return &e;
        return nullptr;
    }

    // Entry at (x, p - y); for y == 0 this coincides with the exact match.
    const Entry* find_negated(const Point& pt, std::uint64_t p) const {
        if (pt.is_infinity)
            return infinity_.empty() ? nullptr : &infinity_.front();
        std::uint64_t ny = pt.y == 0 ? 0 : p - pt.y;
        auto it = by_x_.find(pt.x);
        if (it == by_x_.end()) return nullptr;
        for (const Entry& e : it->second)
            if (e.y == ny) return &e;
        return nullptr;
    }

    std::size_t size() const {
        std::size_t s = infinity_.size();
        for (const auto& [x, v] : by_x_) s += v.size();
        return s;
    }

    void clear() {
        by_x_.clear();
        infinity_.clear();
    }

private:
    std::unordered_map<std::uint64_t, std::vector<Entry>> by_x_;
    std::vector<Entry> infinity_;
};

enum class Detector { FullStore, Floyd };

struct Checks {
    bool special = true;
    bool direct = true;
    bool reverse = true;
    // special matches at steps below this threshold are ignored
    std::uint64_t min_special_step = 0;

    bool any() const { return special || direct || reverse; }
};

struct SolveOptions {
    std::uint64_t max_steps; // per attempt
    std::uint32_t restart_budget = 16;
    std::uint64_t seed = 1; // drives restart start points only
    bool check_invariant = false;
};

inline std::uint64_t default_max_steps(std::uint64_t n) {
    std::uint64_t r = 0;
    while ((r + 1) * (r + 1) < n) ++r;
    ++r; // ceil(sqrt(n))
    return 4 * r + 64;
}

namespace detail {

// Tally for [s]pt via double-and-add: one doubling per bit plus one
// addition per set bit.
inline std::uint64_t scalar_mul_ops(std::uint64_t s) {
    if (s == 0) return 0;
    return static_cast<std::uint64_t>(std::bit_width(s)) +
           static_cast<std::uint64_t>(std::popcount(s));
}

inline std::uint64_t start_ops(std::uint64_t a0, std::uint64_t b0) {
    return scalar_mul_ops(a0) + scalar_mul_ops(b0) + 1;
}

inline std::uint64_t draw_exponent(std::mt19937_64& rng, std::uint64_t n) {
    return 1 + rng() % (n - 1);
}

inline void check_invariant_or_throw(const WalkState& s, const GroupContext& ctx,
                                     const SolveOptions& opts) {
    if (opts.check_invariant && !walk::invariant_holds(s, ctx))
        throw std::logic_error("walk invariant violated: R != [a]P + [b]Q");
}

// Collision checks applied to one state, shared by the improved solver and
// the parallel search so both run the identical predicate sequence:
// special points first, then store probe (direct, then reverse), then the
// caller inserts the state and steps.
struct Inspection {
    bool found = false;
    std::uint64_t k = 0;
    CollisionKind kind{};
    bool dead_cycle = false; // exact revisit whose extraction was unusable
};

inline Inspection inspect_state(const WalkState& s, const GroupContext& ctx,
                                const Checks& checks, const VisitStore& store) {
    Inspection out;
    if (checks.special && s.step >= checks.min_special_step) {
        if (auto m = match_special(s, ctx)) {
            if (auto k = resolve_collision_log(m->num, m->den, ctx)) {
                out.found = true;
                out.k = *k;
                out.kind = {m->type};
                return out;
            }
        }
        // unresolvable quotient: keep walking
    }
    if (checks.direct) {
        if (const auto* e = store.find_exact(s.R)) {
            auto k = resolve_collision_log(
                static_cast<std::int64_t>(e->a) - static_cast<std::int64_t>(s.a),
                static_cast<std::int64_t>(s.b) - static_cast<std::int64_t>(e->b), ctx);
            if (k) {
                out.found = true;
                out.k = *k;
                out.kind = {CollisionType::Direct, e->step, s.step};
                return out;
            }
            // revisiting a stored point with an unusable quotient means the
            // walk is locked in a cycle that cannot produce anything new
            out.dead_cycle = true;
        }
    }
    if (checks.reverse) {
        if (const auto* e = store.find_negated(s.R, ctx.curve.p)) {
            auto k = resolve_collision_log(
                static_cast<std::int64_t>(e->a) + static_cast<std::int64_t>(s.a),
                -static_cast<std::int64_t>(e->b) - static_cast<std::int64_t>(s.b), ctx);
            if (k) {
                out.found = true;
                out.k = *k;
                out.kind = {CollisionType::Reverse, e->step, s.step};
                return out;
            }
        }
    }
    return out;
}

} // namespace detail

// Baseline Pollard rho. FullStore records every state and stops at the
// first exact revisit; Floyd runs tortoise/hare until R_i = R_{2i}. Only
// direct collisions are used. Empty optional means Exhausted.
inline std::optional<SolveResult> solve_baseline(const GroupContext& ctx, std::uint64_t a0,
                                                 std::uint64_t b0, Detector detector,
                                                 const SolveOptions& opts) {
    PartitionRule rule{ctx.curve.p};
    std::mt19937_64 rng(opts.seed);
    std::uint64_t total_steps = 0, group_ops = 0;
    VisitStore store;

    for (std::uint32_t attempt = 0;; ++attempt) {
        if (attempt > opts.restart_budget) return std::nullopt;
        WalkState s = walk::start_state(a0, b0, ctx);
        group_ops += detail::start_ops(a0, b0);
        detail::check_invariant_or_throw(s, ctx, opts);
        bool failed = false;

        if (detector == Detector::FullStore) {
            store.clear();
            while (true) {
                if (const auto* e = store.find_exact(s.R)) {
                    total_steps += s.step;
                    auto k = resolve_collision_log(
                        static_cast<std::int64_t>(e->a) - static_cast<std::int64_t>(s.a),
                        static_cast<std::int64_t>(s.b) - static_cast<std::int64_t>(e->b), ctx);
                    if (k)
                        return SolveResult{*k, {CollisionType::Direct, e->step, s.step},
                                           total_steps, attempt, group_ops, a0, b0};
                    failed = true; // degenerate collision, restart
                    break;
                }
                if (s.step >= opts.max_steps) {
                    total_steps += s.step;
                    failed = true;
                    break;
                }
                store.insert(s.R, s.a, s.b, s.step);
                s = walk::step(s, ctx, rule);
                ++group_ops;
                detail::check_invariant_or_throw(s, ctx, opts);
            }
        } else {
            WalkState tortoise = s, hare = s;
            while (true) {
                if (tortoise.step >= opts.max_steps) {
                    total_steps += tortoise.step;
                    failed = true;
                    break;
                }
                tortoise = walk::step(tortoise, ctx, rule);
                hare = walk::step(walk::step(hare, ctx, rule), ctx, rule);
                group_ops += 3;
                detail::check_invariant_or_throw(tortoise, ctx, opts);
                if (tortoise.R == hare.R) {
                    total_steps += tortoise.step;
                    auto k = resolve_collision_log(
                        static_cast<std::int64_t>(tortoise.a) - static_cast<std::int64_t>(hare.a),
                        static_cast<std::int64_t>(hare.b) - static_cast<std::int64_t>(tortoise.b),
                        ctx);
                    if (k)
                        return SolveResult{*k,
                                           {CollisionType::Direct, tortoise.step, hare.step},
                                           total_steps, attempt, group_ops, a0, b0};
                    failed = true;
                    break;
                }
            }
        }

        (void)failed;
        a0 = detail::draw_exponent(rng, ctx.n);
        b0 = detail::draw_exponent(rng, ctx.n);
    }
}

// The improved solver: at every state (R_0 included, before any step) it
// applies the enabled checks in order special, direct, reverse; the first
// usable collision yields k. Unusable quotients are skipped and the walk
// continues, except an exact revisit with a dead quotient, which forces a
// restart since the walk would loop forever.
inline std::optional<SolveResult> solve_improved(const GroupContext& ctx, std::uint64_t a0,
                                                 std::uint64_t b0, const Checks& checks,
                                                 const SolveOptions& opts) {
    if (!checks.any()) throw std::invalid_argument("at least one check must be enabled");
    PartitionRule rule{ctx.curve.p};
    std::mt19937_64 rng(opts.seed);
    std::uint64_t total_steps = 0, group_ops = 0;
    VisitStore store;

    for (std::uint32_t attempt = 0;; ++attempt) {
        if (attempt > opts.restart_budget) return std::nullopt;
        WalkState s = walk::start_state(a0, b0, ctx);
        group_ops += detail::start_ops(a0, b0);
        detail::check_invariant_or_throw(s, ctx, opts);
        store.clear();

        while (true) {
            auto insp = detail::inspect_state(s, ctx, checks, store);
            if (insp.found) {
                total_steps += s.step;
                return SolveResult{insp.k, insp.kind, total_steps, attempt, group_ops, a0, b0};
            }
            if (insp.dead_cycle || s.step >= opts.max_steps) {
                total_steps += s.step;
                break;
            }
            store.insert(s.R, s.a, s.b, s.step);
            s = walk::step(s, ctx, rule);
            ++group_ops;
            detail::check_invariant_or_throw(s, ctx, opts);
        }

        a0 = detail::draw_exponent(rng, ctx.n);
        b0 = detail::draw_exponent(rng, ctx.n);
    }
}

} // namespace ecrho::solver
