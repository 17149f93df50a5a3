#pragma once

// Problem-instance ingestion: a flat JSON record with keys
// p, a, b, px, py, qx, qy and optional n (computed via order_of when
// absent). Arrays of records describe bench campaigns. Deserialized
// instances are fully validated before use.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecrho/curve.hpp"

namespace ecrho::instance {

struct InstanceSpec {
    std::uint64_t p, a, b;
    std::uint64_t px, py;
    std::uint64_t qx, qy;
    std::optional<std::uint64_t> n;

    bool operator==(const InstanceSpec&) const = default;
};

inline nlohmann::json to_json(const InstanceSpec& s) {
    nlohmann::json j{{"p", s.p}, {"a", s.a},  {"b", s.b},  {"px", s.px},
                     {"py", s.py}, {"qx", s.qx}, {"qy", s.qy}};
    if (s.n) j["n"] = *s.n;
    return j;
}

// Canonical serialization: nlohmann keeps keys sorted, so
// serialize -> parse -> serialize is byte-identical.
inline std::string serialize(const InstanceSpec& s) { return to_json(s).dump(); }

inline InstanceSpec from_json(const nlohmann::json& j) {
    InstanceSpec s;
    s.p = j.at("p").get<std::uint64_t>();
    s.a = j.at("a").get<std::uint64_t>();
    s.b = j.at("b").get<std::uint64_t>();
    s.px = j.at("px").get<std::uint64_t>();
    s.py = j.at("py").get<std::uint64_t>();
    s.qx = j.at("qx").get<std::uint64_t>();
    s.qy = j.at("qy").get<std::uint64_t>();
    if (j.contains("n")) s.n = j.at("n").get<std::uint64_t>();
    return s;
}

inline InstanceSpec parse(const std::string& text) {
    return from_json(nlohmann::json::parse(text));
}

// Validates the curve, both points, and the declared order (when given,
// checked by [n]P == O; otherwise computed by repeated addition).
inline curve::GroupContext make_context(const InstanceSpec& s) {
    curve::CurveParams c(s.p, s.a, s.b);
    curve::Point P = curve::Point::affine(s.px, s.py);
    curve::Point Q = curve::Point::affine(s.qx, s.qy);
    if (!curve::is_on_curve(P, c)) throw std::invalid_argument("P is not on the curve");
    if (!curve::is_on_curve(Q, c)) throw std::invalid_argument("Q is not on the curve");
    std::uint64_t n;
    if (s.n) {
        n = *s.n;
    } else {
        auto ord = curve::order_of(P, c, 2 * s.p + 3);
        if (!ord) throw std::invalid_argument("could not determine ord(P)");
        n = *ord;
    }
    return curve::GroupContext(c, P, Q, n);
}

// A file holds either one record or an array of records.
inline std::vector<InstanceSpec> parse_many(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<InstanceSpec> out;
    if (j.is_array())
        for (const auto& e : j) out.push_back(from_json(e));
    else
        out.push_back(from_json(j));
    return out;
}

} // namespace ecrho::instance
