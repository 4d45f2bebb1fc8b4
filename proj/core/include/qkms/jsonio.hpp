#pragma once

#include <json.hpp>

#include "qkms/ratfunc.hpp"

namespace qkms {

using Json = nlohmann::ordered_json;

/// Big integers are emitted as JSON numbers when they fit in 64 bits and
/// as decimal strings otherwise.
inline Json int_to_json(const Int& v) {
    if (v >= std::numeric_limits<int64_t>::min() && v <= std::numeric_limits<int64_t>::max())
        return Json(static_cast<int64_t>(v));
    return Json(v.str());
}

inline Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw std::invalid_argument("expected integer or decimal string");
}

/// LaurentPi <-> JSON array of [exponent, even, odd] triples,
/// exponents strictly increasing.
inline Json laurent_pi_to_json(const LaurentPi& x) {
    Json arr = Json::array();
    for (const auto& [e, c] : x.terms())
        arr.push_back(Json::array({Json(e), int_to_json(c.ev), int_to_json(c.od)}));
    return arr;
}

inline LaurentPi laurent_pi_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("LaurentPi: expected array");
    LaurentPi x;
    int prev = 0;
    bool first = true;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3)
            throw std::invalid_argument("LaurentPi: expected [exp, even, odd] triples");
        int e = t[0].get<int>();
        if (!first && e <= prev)
            throw std::invalid_argument("LaurentPi: exponents must be strictly increasing");
        prev = e;
        first = false;
        x.add_term(e, PiScalar(int_from_json(t[1]), int_from_json(t[2])));
    }
    return x;
}

inline Json zpoly_to_json(const ZPoly& p) {
    Json arr = Json::array();
    for (const auto& c : p.coeffs()) arr.push_back(int_to_json(c));
    return arr;
}

inline ZPoly zpoly_from_json(const Json& j) {
    std::vector<Int> c;
    for (const auto& v : j) c.push_back(int_from_json(v));
    return ZPoly(std::move(c));
}

/// RatFuncPi <-> {plus: {num, den}, minus: {num, den}} with
/// integer-coefficient polynomial arrays, constant term first.
inline Json ratfunc_pi_to_json(const RatFuncPi& x) {
    Json j;
    j["plus"] = Json{{"num", zpoly_to_json(x.plus.num())}, {"den", zpoly_to_json(x.plus.den())}};
    j["minus"] = Json{{"num", zpoly_to_json(x.minus.num())}, {"den", zpoly_to_json(x.minus.den())}};
    return j;
}

inline RatFuncPi ratfunc_pi_from_json(const Json& j) {
    auto comp = [](const Json& c) {
        return RatFunc(zpoly_from_json(c.at("num")), zpoly_from_json(c.at("den")));
    };
    return RatFuncPi(comp(j.at("plus")), comp(j.at("minus")));
}

inline Json rat_to_json(const Rat& r) {
    if (denominator(r) == 1) return int_to_json(numerator(r));
    return Json::array({int_to_json(numerator(r)), int_to_json(denominator(r))});
}

inline Rat rat_from_json(const Json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw std::invalid_argument("rational: expected [num, den]");
        return Rat(int_from_json(j[0]), int_from_json(j[1]));
    }
    return Rat(int_from_json(j));
}

}  // namespace qkms
