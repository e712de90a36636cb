// Canonical JSON encoding: sorted keys, no floats, integers as int64 or
// decimal strings, rationals as {num, den} pairs.

#pragma once

#include "frobken/types.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace frobken {

inline nlohmann::json json_int(const Int& v) {
    if (v.fits_slong_p()) return nlohmann::json(static_cast<long long>(v.get_si()));
    return nlohmann::json(v.get_str());
}

inline nlohmann::json json_ivec(const IVec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_int(v(i)));
    return a;
}

inline nlohmann::json json_rat(const Rat& r) {
    return nlohmann::json{{"den", json_int(r.get_den())}, {"num", json_int(r.get_num())}};
}

inline Int int_from_json(const nlohmann::json& j) {
    if (j.is_string()) return Int(j.get<std::string>());
    return Int(static_cast<long>(j.get<std::int64_t>()));
}

inline IVec ivec_from_json(const nlohmann::json& a) {
    IVec v(static_cast<Eigen::Index>(a.size()));
    Eigen::Index i = 0;
    for (const auto& x : a) v(i++) = int_from_json(x);
    return v;
}

inline Rat rat_from_json(const nlohmann::json& j) {
    Rat r(int_from_json(j.at("num")), int_from_json(j.at("den")));
    r.canonicalize();
    return r;
}

/// Byte-deterministic rendering: nlohmann objects keep keys sorted, so a
/// fixed-indent dump is canonical.
inline std::string dump_canonical(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace frobken
