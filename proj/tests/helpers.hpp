#pragma once

// Shared fixtures and generators for the test suites.

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecrho/curve.hpp"
#include "ecrho/instance.hpp"
#include "ecrho/walk.hpp"

namespace ecrho::testing {

#ifndef ECRHO_FIXTURE_DIR
#error "ECRHO_FIXTURE_DIR must be defined"
#endif

inline std::string fixture_path(const std::string& name) {
    return std::string(ECRHO_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Worked instance 1: y^2 = x^3 + 130x + 565 over F_719,
// P = (312, 90) of order 233, Q = (475, 662), log_P Q = 158.
inline curve::GroupContext example1() {
    return instance::make_context(instance::parse(read_file(fixture_path("example1.json"))));
}

// Worked instance 2: y^2 = x^3 + 250x + 844 over F_1009,
// P = (909, 601) of order 1007 = 19 * 53, Q = (134, 52), log_P Q = 766.
inline curve::GroupContext example2() {
    return instance::make_context(instance::parse(read_file(fixture_path("example2.json"))));
}

// Walk-table fixture: CSV rows (i, x|inf, y|inf, a, b), '#' comments skipped.
inline std::vector<walk::TraceRow> load_table(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (!in) throw std::runtime_error("cannot open table " + name);
    std::vector<walk::TraceRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) throw std::runtime_error("bad table row: " + line);
        walk::TraceRow r;
        r.i = std::stoull(cells[0]);
        if (cells[1] == "inf")
            r.R = curve::Point::infinity();
        else
            r.R = curve::Point::affine(std::stoull(cells[1]), std::stoull(cells[2]));
        r.a = std::stoull(cells[3]);
        r.b = std::stoull(cells[4]);
        rows.push_back(r);
    }
    return rows;
}

inline std::uint64_t next_prime(std::uint64_t n) {
    if (n <= 2) return 2;
    if (n % 2 == 0) ++n;
    while (!curve::is_prime(n)) n += 2;
    return n;
}

// Any affine point, found by scanning x from a random offset and solving
// for y by exhaustive search (desk scale).
inline curve::Point find_point(const curve::CurveParams& c, std::mt19937_64& rng) {
    std::uint64_t x0 = rng() % c.p;
    for (std::uint64_t d = 0; d < c.p; ++d) {
        std::uint64_t x = (x0 + d) % c.p;
        std::uint64_t rhs = modular::mod_add(
            modular::mod_mul(modular::mod_mul(x, x, c.p), x, c.p),
            modular::mod_add(modular::mod_mul(c.a, x, c.p), c.b, c.p), c.p);
        for (std::uint64_t y = 0; y <= c.p / 2; ++y)
            if (modular::mod_mul(y, y, c.p) == rhs) return curve::Point::affine(x, y);
    }
    throw std::runtime_error("no affine point found");
}

struct RandomInstance {
    curve::GroupContext ctx;
    std::uint64_t k; // ground truth: Q = [k]P
};

// Random solvable instance with n = ord(P) in (min_n, max_n) and
// k in [2, n-2].
inline RandomInstance random_instance(std::mt19937_64& rng, std::uint64_t min_n = 50,
                                      std::uint64_t max_n = 5000) {
    for (int tries = 0; tries < 1000; ++tries) {
        std::uint64_t p = next_prime(101 + rng() % 1900);
        std::uint64_t a = rng() % p;
        std::uint64_t b = rng() % p;
        try {
            curve::CurveParams c(p, a, b);
            curve::Point P = find_point(c, rng);
            if (P.is_infinity) continue;
            auto ord = curve::order_of(P, c, 2 * p + 3);
            if (!ord || *ord <= min_n || *ord >= max_n || *ord < 7) continue;
            std::uint64_t n = *ord;
            std::uint64_t k = 2 + rng() % (n - 3);
            curve::Point Q = curve::scalar_mul(k, P, c);
            return {curve::GroupContext(c, P, Q, n), k};
        } catch (const std::invalid_argument&) {
            continue; // singular curve, redraw
        }
    }
    throw std::runtime_error("failed to generate a random instance");
}

// Random curve (no designated points) for group-law property tests.
inline curve::CurveParams random_curve(std::mt19937_64& rng, std::uint64_t min_p = 101,
                                       std::uint64_t span = 1900) {
    for (int tries = 0; tries < 1000; ++tries) {
        std::uint64_t p = next_prime(min_p + rng() % span);
        try {
            return curve::CurveParams(p, rng() % p, rng() % p);
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    throw std::runtime_error("failed to generate a random curve");
}

} // namespace ecrho::testing
