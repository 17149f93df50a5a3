#pragma once

// Benchmark campaigns: runs each requested method on each (instance,
// start-exponent) trial and collects per-trial rows plus per-method
// aggregates. Detection steps are reported in two conventions: the step
// index of the detecting state, and rows_examined = step + 1 (table rows
// looked at, counting row 0).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecrho/solver.hpp"

namespace ecrho::bench {

using curve::GroupContext;

struct Method {
    std::string name;
    bool baseline; // baseline solvers ignore checks
    solver::Detector detector = solver::Detector::FullStore;
    solver::Checks checks{};
};

inline Method method_from_name(const std::string& name) {
    if (name == "baseline-store") return {name, true, solver::Detector::FullStore};
    if (name == "baseline-floyd") return {name, true, solver::Detector::Floyd};
    if (name == "improved") return {name, false};
    if (name == "improved-special")
        return {name, false, solver::Detector::FullStore, {true, false, false, 0}};
    if (name == "improved-special-skip0")
        return {name, false, solver::Detector::FullStore, {true, false, false, 1}};
    if (name == "improved-nospecial")
        return {name, false, solver::Detector::FullStore, {false, true, true, 0}};
    throw std::invalid_argument("unknown method: " + name);
}

struct TrialRow {
    std::string instance_id;
    std::string method;
    std::uint64_t trial;
    std::uint64_t a0, b0;
    bool solved;
    std::uint64_t k = 0;
    std::string kind;
    std::uint64_t detection_step = 0;
    std::uint64_t rows_examined = 0;
    std::uint64_t group_ops = 0;
    std::uint32_t restarts = 0;
};

struct Aggregate {
    std::string method;
    std::uint64_t trials = 0;
    std::uint64_t exhausted = 0;
    double mean_step = 0.0;
    double median_step = 0.0;
    std::map<std::string, std::uint64_t> kind_counts;
};

struct BenchReport {
    std::vector<TrialRow> rows;
    std::vector<Aggregate> aggregates;
};

struct BenchConfig {
    std::uint64_t trials = 1;
    std::uint64_t seed = 1;
    // when set, every trial uses these start exponents instead of drawing
    std::optional<std::uint64_t> a0;
    std::optional<std::uint64_t> b0;
    std::optional<std::uint64_t> max_steps; // default: 4*ceil(sqrt(n)) + 64
};

inline TrialRow run_one(const GroupContext& ctx, const std::string& instance_id,
                        const Method& m, std::uint64_t trial, std::uint64_t a0,
                        std::uint64_t b0, const solver::SolveOptions& opts) {
    std::optional<solver::SolveResult> r =
        m.baseline ? solver::solve_baseline(ctx, a0, b0, m.detector, opts)
                   : solver::solve_improved(ctx, a0, b0, m.checks, opts);
    TrialRow row{instance_id, m.name, trial, a0, b0, r.has_value()};
    if (r) {
        row.k = r->k;
        row.kind = solver::to_string(r->kind.type);
        row.detection_step = r->steps_taken;
        row.rows_examined = r->steps_taken + 1;
        row.group_ops = r->group_ops;
        row.restarts = r->restarts;
    }
    return row;
}

inline Aggregate aggregate_for(const std::string& method, const std::vector<TrialRow>& rows) {
    Aggregate agg;
    agg.method = method;
    std::vector<double> steps;
    for (const auto& r : rows) {
        if (r.method != method) continue;
        ++agg.trials;
        if (!r.solved) {
            ++agg.exhausted;
            continue;
        }
        steps.push_back(static_cast<double>(r.detection_step));
        ++agg.kind_counts[r.kind];
    }
    if (!steps.empty()) {
        double sum = 0;
        for (double s : steps) sum += s;
        agg.mean_step = sum / static_cast<double>(steps.size());
        std::sort(steps.begin(), steps.end());
        std::size_t mid = steps.size() / 2;
        agg.median_step = steps.size() % 2 ? steps[mid] : (steps[mid - 1] + steps[mid]) / 2.0;
    }
    return agg;
}

inline BenchReport run_campaign(const std::vector<std::pair<std::string, GroupContext>>& instances,
                                const std::vector<Method>& methods, const BenchConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    BenchReport report;
    std::mt19937_64 rng(cfg.seed);
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
        for (const auto& [id, ctx] : instances) {
            std::uint64_t a0 = cfg.a0 ? *cfg.a0 : solver::detail::draw_exponent(rng, ctx.n);
            std::uint64_t b0 = cfg.b0 ? *cfg.b0 : solver::detail::draw_exponent(rng, ctx.n);
            solver::SolveOptions opts{cfg.max_steps ? *cfg.max_steps
                                                    : solver::default_max_steps(ctx.n),
                                      16, cfg.seed ^ (t + 1)};
            // identical start exponents for every method on this trial
            for (const auto& m : methods)
                report.rows.push_back(run_one(ctx, id, m, t, a0, b0, opts));
        }
    }
    for (const auto& m : methods)
        report.aggregates.push_back(aggregate_for(m.name, report.rows));
    return report;
}

inline std::string report_csv(const BenchReport& r) {
    std::ostringstream os;
    os << "instance,method,trial,a0,b0,solved,k,kind,detection_step,rows_examined,"
          "group_ops,restarts\n";
    for (const auto& row : r.rows) {
        os << row.instance_id << ',' << row.method << ',' << row.trial << ',' << row.a0
           << ',' << row.b0 << ',' << (row.solved ? 1 : 0) << ',' << row.k << ','
           << row.kind << ',' << row.detection_step << ',' << row.rows_examined << ','
           << row.group_ops << ',' << row.restarts << '\n';
    }
    return os.str();
}

inline nlohmann::json report_json(const BenchReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"instance", row.instance_id},
                        {"method", row.method},
                        {"trial", row.trial},
                        {"a0", row.a0},
                        {"b0", row.b0},
                        {"solved", row.solved},
                        {"k", row.k},
                        {"kind", row.kind},
                        {"detection_step", row.detection_step},
                        {"rows_examined", row.rows_examined},
                        {"group_ops", row.group_ops},
                        {"restarts", row.restarts}});
    }
    nlohmann::json aggs = nlohmann::json::array();
    for (const auto& a : r.aggregates) {
        nlohmann::json kinds = nlohmann::json::object();
        for (const auto& [k, v] : a.kind_counts) kinds[k] = v;
        aggs.push_back({{"method", a.method},
                        {"trials", a.trials},
                        {"exhausted", a.exhausted},
                        {"mean_step", a.mean_step},
                        {"median_step", a.median_step},
                        {"kind_counts", kinds}});
    }
    return {{"rows", rows}, {"aggregates", aggs}};
}

} // namespace ecrho::bench
