#include "adelic/json_io.hpp"

namespace adelic {

namespace {

const Json& require_key(const Json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key))
        throw UsageError("missing field \"" + key + "\"");
    return j.at(key);
}

std::string require_string(const Json& j, const std::string& key) {
    const Json& v = require_key(j, key);
    if (!v.is_string()) throw UsageError("field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

const Json& require_array(const Json& j, const std::string& key) {
    const Json& v = require_key(j, key);
    if (!v.is_array()) throw UsageError("field \"" + key + "\" must be an array");
    return v;
}

long require_long(const Json& j, const std::string& key) {
    const Json& v = require_key(j, key);
    if (!v.is_number_integer()) throw UsageError("field \"" + key + "\" must be an integer");
    return v.get<long>();
}

PrimeSetExpr set_from_json(const Json& j, const std::string& key) {
    if (!j.is_string()) throw UsageError("field \"" + key + "\" must be a set expression");
    return ps_parse(j.get<std::string>());
}

}  // namespace

Json exponent_json(const ExtInt& e) {
    if (e.inf) return Json("inf");
    return Json(e.v);
}

ExtInt exponent_from_json(const Json& j, const std::string& key) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return ExtInt::infinity();
        throw UsageError("field \"" + key + "\" must be an integer or \"inf\"");
    }
    if (j.is_number_integer()) return ExtInt::finite(j.get<long>());
    throw UsageError("field \"" + key + "\" must be an integer or \"inf\"");
}

Json superideal_json(const SuperIdeal& a) {
    Json pieces = Json::array();
    for (const auto& [S, e] : a.pieces)
        pieces.push_back(Json{{"set", ps_print(S)}, {"exp", exponent_json(e)}});
    return Json{{"pieces", pieces}};
}

SuperIdeal superideal_from_json(const Json& j, const Field& F) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "unit") return superideal_unit();
        if (s == "zero") return superideal_zero();
        throw UsageError("superideal shorthand must be \"unit\" or \"zero\"");
    }
    if (j.is_object() && j.contains("element"))
        return superideal_of(F.parse_element(require_string(j, "element")), F);
    std::vector<std::pair<PrimeSetExpr, ExtInt>> pieces;
    for (const Json& pj : require_array(j, "pieces")) {
        PrimeSetExpr S = set_from_json(require_key(pj, "set"), "set");
        pieces.push_back({std::move(S), exponent_from_json(require_key(pj, "exp"), "exp")});
    }
    return superideal_make(std::move(pieces), F);
}

Json local_json(const LocalValue& v, const Field& F) {
    if (v.exact) return Json{{"kind", "exact"}, {"value", F.element_str(v.value)}};
    return Json{{"kind", "generic"},
                {"valuation", exponent_json(v.valuation)},
                {"notInK", v.not_in_k}};
}

LocalValue local_from_json(const Json& j, const Field& F) {
    std::string kind = require_string(j, "kind");
    if (kind == "exact")
        return LocalValue::exact_k(F.parse_element(require_string(j, "value")));
    if (kind == "generic") {
        ExtInt v = exponent_from_json(require_key(j, "valuation"), "valuation");
        bool nik = false;
        if (j.contains("notInK")) {
            if (!j.at("notInK").is_boolean())
                throw UsageError("field \"notInK\" must be a boolean");
            nik = j.at("notInK").get<bool>();
        }
        return LocalValue::generic(v, nik);
    }
    throw UsageError("field \"kind\" must be \"exact\" or \"generic\"");
}

Json sketch_json(const AdeleSketch& r, const Field& F) {
    Json out{{"global", F.element_str(r.global)}};
    if (!r.overrides.empty()) {
        Json ov = Json::array();
        for (const auto& [S, v] : r.overrides)
            ov.push_back(Json{{"set", ps_print(S)}, {"local", local_json(v, F)}});
        out["overrides"] = ov;
    }
    return out;
}

AdeleSketch sketch_from_json(const Json& j, const Field& F) {
    if (j.is_string()) return sketch_make(F.parse_element(j.get<std::string>()), {}, F);
    Element global = F.parse_element(require_string(j, "global"));
    std::vector<std::pair<PrimeSetExpr, LocalValue>> overrides;
    if (j.contains("overrides"))
        for (const Json& oj : require_array(j, "overrides")) {
            PrimeSetExpr S = set_from_json(require_key(oj, "set"), "set");
            overrides.push_back(
                {std::move(S), local_from_json(require_key(oj, "local"), F)});
        }
    return sketch_make(std::move(global), std::move(overrides), F);
}

Json point_json(const OmegaPoint& w, const Field& F) {
    return Json{{"r", sketch_json(w.r, F)}, {"a", superideal_json(w.a)}};
}

OmegaPoint point_from_json(const Json& j, const Field& F) {
    return point_make(sketch_from_json(require_key(j, "r"), F),
                      superideal_from_json(require_key(j, "a"), F));
}

Json group_json(const GroupElement& g, const Field& F) {
    return Json{{"x", F.element_str(g.x)}, {"k", F.element_str(g.k)}};
}

GroupElement group_from_json(const Json& j, const Field& F) {
    return ge_make(F.parse_element(require_string(j, "x")),
                   F.parse_element(require_string(j, "k")));
}

Json neighborhood_json(const BasicNeighborhood& V, const Field& F) {
    Json out{{"target", point_json(V.target, F)}};
    Json ex = Json::array(), fl = Json::array(), fc = Json::array();
    for (const auto& [P, v] : V.exact)
        ex.push_back(Json{{"prime", P.label}, {"exp", v}});
    for (const auto& [P, n] : V.floors)
        fl.push_back(Json{{"prime", P.label}, {"min", n}});
    for (const auto& [P, m] : V.first)
        fc.push_back(Json{{"prime", P.label}, {"prec", m}});
    if (!ex.empty()) out["exact"] = ex;
    if (!fl.empty()) out["floors"] = fl;
    if (!fc.empty()) out["first"] = fc;
    return out;
}

BasicNeighborhood neighborhood_from_json(const Json& j, const Field& F) {
    BasicNeighborhood V;
    V.target = point_from_json(require_key(j, "target"), F);
    if (j.contains("exact"))
        for (const Json& e : require_array(j, "exact"))
            V.exact.push_back({F.require_prime(require_string(e, "prime")),
                               require_long(e, "exp")});
    if (j.contains("floors"))
        for (const Json& e : require_array(j, "floors"))
            V.floors.push_back({F.require_prime(require_string(e, "prime")),
                                require_long(e, "min")});
    if (j.contains("first"))
        for (const Json& e : require_array(j, "first"))
            V.first.push_back({F.require_prime(require_string(e, "prime")),
                               require_long(e, "prec")});
    return V;
}

Json stabilizer_json(const StabilizerDescription& s, const Field& F) {
    Json out{{"tag", stab_tag_name(s.tag)}};
    if (s.conjugator) out["conjugator"] = group_json(*s.conjugator, F);
    if (!s.constraints.empty()) out["constraints"] = s.constraints;
    return out;
}

Json interval_json(const ValInterval& iv) {
    Json lower = iv.minus_inf ? Json("-inf") : exponent_json(iv.lower);
    return Json{{"lower", lower}, {"exact", iv.exact}};
}

Json open_json(const PowerCofiniteOpen& U) {
    Json gens = Json::array();
    for (const auto& G : U.gens) {
        Json g = Json::array();
        for (const auto& P : G) g.push_back(P.label);
        gens.push_back(g);
    }
    return Json{{"gens", gens}};
}

PowerCofiniteOpen open_from_json(const Json& j, const Field& F) {
    std::vector<std::vector<PrimeIdeal>> gens;
    for (const Json& gj : require_array(j, "gens")) {
        if (!gj.is_array()) throw UsageError("field \"gens\" must hold arrays of labels");
        std::vector<PrimeIdeal> G;
        for (const Json& lj : gj) {
            if (!lj.is_string())
                throw UsageError("field \"gens\" must hold arrays of labels");
            G.push_back(F.require_prime(lj.get<std::string>()));
        }
        gens.push_back(std::move(G));
    }
    return pc_make(std::move(gens));
}

}  // namespace adelic
