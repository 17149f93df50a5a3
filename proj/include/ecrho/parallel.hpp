#pragma once

// Multi-walker collision search: several walkers with distinct start
// exponents insert into one shared visit store, so any cross-walker direct
// or reverse match, or any special-point hit, solves the instance.
// Sequential schedule interleaves walkers round-robin and is fully
// deterministic; Concurrent runs one thread per walker with the store's
// probe-and-insert as the single synchronized operation.

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "ecrho/solver.hpp"

namespace ecrho::parallel {

using curve::GroupContext;
using solver::Checks;
using solver::SolveResult;
using solver::VisitStore;
using walk::PartitionRule;
using walk::WalkState;

enum class Schedule { Sequential, Concurrent };

struct WalkerConfig {
    int walker_id;
    std::uint64_t a0;
    std::uint64_t b0;
};

// Per-walker generator keyed off the master seed, so adding walkers never
// changes earlier walkers' start points.
inline WalkerConfig derive_walker(std::uint64_t master_seed, int walker_id, std::uint64_t n) {
    std::mt19937_64 rng(master_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(walker_id) + 1));
    return {walker_id, solver::detail::draw_exponent(rng, n),
            solver::detail::draw_exponent(rng, n)};
}

struct ParallelOptions {
    std::uint64_t max_total_steps;
    std::uint64_t master_seed = 1;
    Schedule schedule = Schedule::Sequential;
    Checks checks{};
    bool check_invariant = false;
    // fixes walker 0's start exponents instead of deriving them
    std::optional<std::uint64_t> a0;
    std::optional<std::uint64_t> b0;
};

namespace detail {

inline std::vector<WalkerConfig> make_configs(const GroupContext& ctx, int walkers,
                                              const ParallelOptions& opts) {
    std::vector<WalkerConfig> cfgs;
    for (int w = 0; w < walkers; ++w) {
        WalkerConfig c = derive_walker(opts.master_seed, w, ctx.n);
        if (w == 0) {
            if (opts.a0) c.a0 = *opts.a0;
            if (opts.b0) c.b0 = *opts.b0;
        }
        cfgs.push_back(c);
    }
    return cfgs;
}

inline std::optional<SolveResult> run_sequential(const GroupContext& ctx,
                                                 const std::vector<WalkerConfig>& cfgs,
                                                 const ParallelOptions& opts) {
    PartitionRule rule{ctx.curve.p};
    solver::SolveOptions inv_opts{0, 0, 0, opts.check_invariant};
    VisitStore store;
    std::vector<WalkState> states;
    std::vector<bool> alive(cfgs.size(), true);
    std::uint64_t group_ops = 0;
    for (const auto& c : cfgs) {
        states.push_back(walk::start_state(c.a0, c.b0, ctx));
        group_ops += solver::detail::start_ops(c.a0, c.b0);
        solver::detail::check_invariant_or_throw(states.back(), ctx, inv_opts);
    }

    auto total_steps = [&] {
        std::uint64_t t = 0;
        for (const auto& s : states) t += s.step;
        return t;
    };

    while (true) {
        bool any_alive = false;
        for (std::size_t w = 0; w < states.size(); ++w) {
            if (!alive[w]) continue;
            any_alive = true;
            WalkState& s = states[w];
            auto insp = solver::detail::inspect_state(s, ctx, opts.checks, store);
            if (insp.found)
                return SolveResult{insp.k, insp.kind, total_steps(), 0,
                                   group_ops, cfgs[w].a0, cfgs[w].b0};
            if (insp.dead_cycle) {
                alive[w] = false; // cycling walker can contribute nothing new
                continue;
            }
            store.insert(s.R, s.a, s.b, s.step, cfgs[w].walker_id);
            s = walk::step(s, ctx, rule);
            ++group_ops;
            solver::detail::check_invariant_or_throw(s, ctx, inv_opts);
            if (total_steps() >= opts.max_total_steps) return std::nullopt;
        }
        if (!any_alive) return std::nullopt;
    }
}

inline std::optional<SolveResult> run_concurrent(const GroupContext& ctx,
                                                 const std::vector<WalkerConfig>& cfgs,
                                                 const ParallelOptions& opts) {
    PartitionRule rule{ctx.curve.p};
    solver::SolveOptions inv_opts{0, 0, 0, opts.check_invariant};
    VisitStore store;
    std::mutex store_mutex;
    std::mutex result_mutex;
    std::atomic<bool> stop{false};
    std::atomic<std::uint64_t> steps_spent{0};
    std::atomic<std::uint64_t> group_ops{0};
    std::optional<SolveResult> result;

    auto worker = [&](const WalkerConfig& cfg) {
        WalkState s = walk::start_state(cfg.a0, cfg.b0, ctx);
        group_ops += solver::detail::start_ops(cfg.a0, cfg.b0);
        solver::detail::check_invariant_or_throw(s, ctx, inv_opts);
        while (!stop.load(std::memory_order_relaxed)) {
            solver::detail::Inspection insp;
            {
                // probe and insert must be one atomic pair so two walkers
                // cannot both miss a simultaneous match
                std::lock_guard lock(store_mutex);
                insp = solver::detail::inspect_state(s, ctx, opts.checks, store);
                if (!insp.found && !insp.dead_cycle)
                    store.insert(s.R, s.a, s.b, s.step, cfg.walker_id);
            }
            if (insp.found) {
                std::lock_guard lock(result_mutex);
                if (!result)
                    result = SolveResult{insp.k, insp.kind,
                                         steps_spent.load() , 0,
                                         group_ops.load(), cfg.a0, cfg.b0};
                stop.store(true);
                return;
            }
            if (insp.dead_cycle) return;
            if (steps_spent.fetch_add(1) >= opts.max_total_steps) return;
            s = walk::step(s, ctx, rule);
            group_ops += 1;
            solver::detail::check_invariant_or_throw(s, ctx, inv_opts);
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(cfgs.size());
    for (const auto& c : cfgs) threads.emplace_back(worker, c);
    for (auto& t : threads) t.join();
    return result;
}

} // namespace detail

inline std::optional<SolveResult> solve_parallel(const GroupContext& ctx, int walkers,
                                                 const ParallelOptions& opts) {
    if (walkers < 1) throw std::invalid_argument("walkers must be >= 1");
    auto cfgs = detail::make_configs(ctx, walkers, opts);
    if (opts.schedule == Schedule::Sequential)
        return detail::run_sequential(ctx, cfgs, opts);
    return detail::run_concurrent(ctx, cfgs, opts);
}

} // namespace ecrho::parallel
