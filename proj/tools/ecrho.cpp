// ecrho: desk-scale ECDLP toolkit built around Pollard's rho with
// special-point and reverse collision detection.
//
//   ecrho walk    --instance f.json --a0 2 --b0 87 --steps 18
//   ecrho solve   --instance f.json --method improved
//   ecrho bench   --instances f.json --trials 100 --methods baseline-store,improved
//   ecrho oracle  --instance f.json
//
// Exit codes: 0 solved/OK, 1 unsolved or exhausted, 2 invalid input.

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecrho/bench.hpp"
#include "ecrho/instance.hpp"
#include "ecrho/oracle.hpp"
#include "ecrho/parallel.hpp"
#include "ecrho/solver.hpp"

namespace {

using namespace ecrho;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

nlohmann::json row_json(const walk::TraceRow& r) {
    nlohmann::json j{{"i", r.i}, {"a", r.a}, {"b", r.b}};
    if (r.R.is_infinity) {
        j["x"] = "inf";
        j["y"] = "inf";
    } else {
        j["x"] = r.R.x;
        j["y"] = r.R.y;
    }
    return j;
}

void print_trace(const std::vector<walk::TraceRow>& rows, const std::string& format) {
    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) arr.push_back(row_json(r));
        std::cout << arr.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << "i,x,y,a,b\n";
        for (const auto& r : rows) std::cout << walk::row_csv(r) << '\n';
    } else {
        std::cout << "i\tR_i\ta_i\tb_i\n";
        for (const auto& r : rows) {
            std::string pt = r.R.is_infinity
                                 ? std::string("inf")
                                 : "(" + std::to_string(r.R.x) + ", " + std::to_string(r.R.y) + ")";
            std::cout << r.i << '\t' << pt << '\t' << r.a << '\t' << r.b << '\n';
        }
    }
}

nlohmann::json result_json(const solver::SolveResult& r) {
    nlohmann::json j{{"k", r.k},
                     {"kind", solver::to_string(r.kind.type)},
                     {"detection_step", r.steps_taken},
                     {"rows_examined", r.steps_taken + 1},
                     {"group_ops", r.group_ops},
                     {"restarts", r.restarts},
                     {"a0", r.a0},
                     {"b0", r.b0}};
    if (r.kind.type == solver::CollisionType::Direct ||
        r.kind.type == solver::CollisionType::Reverse) {
        j["i"] = r.kind.i;
        j["j"] = r.kind.j;
    }
    return j;
}

void print_result(const solver::SolveResult& r, const std::string& format) {
    if (format == "json") {
        std::cout << result_json(r).dump(2) << '\n';
        return;
    }
    std::string indices;
    if (r.kind.type == solver::CollisionType::Direct ||
        r.kind.type == solver::CollisionType::Reverse)
        indices = "(" + std::to_string(r.kind.i) + ", " + std::to_string(r.kind.j) + ")";
    if (format == "csv") {
        std::cout << "k,kind,i,j,detection_step,rows_examined,group_ops,restarts,a0,b0\n"
                  << r.k << ',' << solver::to_string(r.kind.type) << ',' << r.kind.i << ','
                  << r.kind.j << ',' << r.steps_taken << ',' << r.steps_taken + 1 << ','
                  << r.group_ops << ',' << r.restarts << ',' << r.a0 << ',' << r.b0 << '\n';
    } else {
        std::cout << "k = " << r.k << '\n'
                  << "collision = " << solver::to_string(r.kind.type) << indices << '\n'
                  << "detection step = " << r.steps_taken
                  << " (rows examined = " << r.steps_taken + 1 << ")\n"
                  << "group ops = " << r.group_ops << ", restarts = " << r.restarts << '\n'
                  << "start = (a0 = " << r.a0 << ", b0 = " << r.b0 << ")\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale ECDLP toolkit: Pollard rho with special-point "
                 "and reverse collisions"};
    app.require_subcommand(1);

    std::string instance_path, format = "table", out_path;
    std::uint64_t a0 = 0, b0 = 0, steps = 0, seed = 1, trials = 1;
    std::uint64_t max_steps = 0, skip_special_before = 0;
    int walkers = 1;
    std::string method = "improved", schedule = "seq", checks_str = "special,direct,reverse";
    std::string methods_str = "baseline-store,improved";

    auto* cmd_walk = app.add_subcommand("walk", "dump the rho walk table");
    cmd_walk->add_option("--instance", instance_path)->required();
    cmd_walk->add_option("--a0", a0)->required();
    cmd_walk->add_option("--b0", b0)->required();
    cmd_walk->add_option("--steps", steps)->required();
    cmd_walk->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));

    auto* cmd_solve = app.add_subcommand("solve", "recover k = log_P Q");
    cmd_solve->add_option("--instance", instance_path)->required();
    cmd_solve->add_option("--method", method)
        ->check(CLI::IsMember({"baseline-store", "baseline-floyd", "improved"}));
    cmd_solve->add_option("--a0", a0);
    cmd_solve->add_option("--b0", b0);
    cmd_solve->add_option("--seed", seed);
    cmd_solve->add_option("--walkers", walkers)->check(CLI::PositiveNumber);
    cmd_solve->add_option("--schedule", schedule)->check(CLI::IsMember({"seq", "conc"}));
    cmd_solve->add_option("--checks", checks_str,
                          "comma list from {special,direct,reverse} (improved/parallel)");
    cmd_solve->add_option("--skip-special-before", skip_special_before,
                          "ignore special-point matches at steps below this");
    cmd_solve->add_option("--max-steps", max_steps, "per-walker step budget");
    cmd_solve->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));

    auto* cmd_bench = app.add_subcommand("bench", "run a benchmark campaign");
    cmd_bench->add_option("--instances", instance_path)->required();
    cmd_bench->add_option("--trials", trials)->check(CLI::PositiveNumber);
    cmd_bench->add_option("--methods", methods_str);
    cmd_bench->add_option("--seed", seed);
    cmd_bench->add_option("--a0", a0, "fix a0 for every trial");
    cmd_bench->add_option("--b0", b0, "fix b0 for every trial");
    cmd_bench->add_option("--max-steps", max_steps);
    cmd_bench->add_option("--out", out_path, "write report here instead of stdout");
    cmd_bench->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));

    auto* cmd_oracle = app.add_subcommand("oracle", "brute-force discrete log");
    cmd_oracle->add_option("--instance", instance_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_walk->parsed()) {
            auto ctx = instance::make_context(instance::parse(read_file(instance_path)));
            auto rows = walk::trace(a0, b0, ctx, steps);
            print_trace(rows, format);
            return 0;
        }

        if (cmd_solve->parsed()) {
            auto ctx = instance::make_context(instance::parse(read_file(instance_path)));
            if (a0 == 0 || b0 == 0) {
                std::mt19937_64 rng(seed);
                if (a0 == 0) a0 = solver::detail::draw_exponent(rng, ctx.n);
                if (b0 == 0) b0 = solver::detail::draw_exponent(rng, ctx.n);
            }
            std::uint64_t budget = max_steps ? max_steps : solver::default_max_steps(ctx.n);
            solver::Checks checks{false, false, false, skip_special_before};
            for (const auto& c : {std::string("special"), std::string("direct"),
                                  std::string("reverse")}) {
                if (checks_str.find(c) == std::string::npos) continue;
                if (c == "special") checks.special = true;
                if (c == "direct") checks.direct = true;
                if (c == "reverse") checks.reverse = true;
            }
            std::optional<solver::SolveResult> r;
            if (walkers > 1) {
                parallel::ParallelOptions popts;
                popts.max_total_steps = budget * static_cast<std::uint64_t>(walkers);
                popts.master_seed = seed;
                popts.schedule = schedule == "conc" ? parallel::Schedule::Concurrent
                                                    : parallel::Schedule::Sequential;
                popts.checks = checks;
                popts.a0 = a0;
                popts.b0 = b0;
                r = parallel::solve_parallel(ctx, walkers, popts);
            } else {
                solver::SolveOptions opts{budget, 16, seed};
                if (method == "baseline-store")
                    r = solver::solve_baseline(ctx, a0, b0, solver::Detector::FullStore, opts);
                else if (method == "baseline-floyd")
                    r = solver::solve_baseline(ctx, a0, b0, solver::Detector::Floyd, opts);
                else
                    r = solver::solve_improved(ctx, a0, b0, checks, opts);
            }
            if (!r) {
                std::cerr << "exhausted: no usable collision within budget\n";
                return 1;
            }
            print_result(*r, format);
            return 0;
        }

        if (cmd_bench->parsed()) {
            auto specs = instance::parse_many(read_file(instance_path));
            std::vector<std::pair<std::string, curve::GroupContext>> instances;
            for (std::size_t i = 0; i < specs.size(); ++i)
                instances.emplace_back("inst" + std::to_string(i),
                                       instance::make_context(specs[i]));
            std::vector<bench::Method> methods;
            std::stringstream ss(methods_str);
            std::string name;
            while (std::getline(ss, name, ','))
                if (!name.empty()) methods.push_back(bench::method_from_name(name));
            bench::BenchConfig cfg;
            cfg.trials = trials;
            cfg.seed = seed;
            if (a0 != 0) cfg.a0 = a0;
            if (b0 != 0) cfg.b0 = b0;
            if (max_steps != 0) cfg.max_steps = max_steps;
            auto report = bench::run_campaign(instances, methods, cfg);
            std::string text = (format == "json") ? bench::report_json(report).dump(2) + "\n"
                                                  : bench::report_csv(report);
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                out << text;
            } else {
                std::cout << text;
            }
            return 0;
        }

        if (cmd_oracle->parsed()) {
            auto ctx = instance::make_context(instance::parse(read_file(instance_path)));
            auto k = oracle::brute_force_log(ctx);
            if (!k) {
                std::cerr << "Q is not in the subgroup generated by P\n";
                return 1;
            }
            std::cout << *k << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
