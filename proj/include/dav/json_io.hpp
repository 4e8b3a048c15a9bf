#pragma once
// JSON shapes shared by every CLI command: groups as invariant-factor lists,
// elements as coordinate arrays, subsets as element arrays, plus the two
// composite input records (order class data, quadratic order spec).

#include <optional>
#include <string>

#include <json.hpp>

#include "dav/elasticity.hpp"
#include "dav/group.hpp"
#include "dav/orders.hpp"
#include "dav/zerosum.hpp"

namespace dav {

using json = nlohmann::json;

inline json group_to_json(const FabGroup& g) {
    return json{{"invariant_factors", g.factors()}};
}

/// Accepts {"invariant_factors":[2,6]} or the bare array [2,6].
inline FabGroup group_from_json(const json& j) {
    try {
        if (j.is_array()) return make_group(j.get<std::vector<std::int64_t>>());
        if (j.is_object() && j.contains("invariant_factors"))
            return make_group(j.at("invariant_factors").get<std::vector<std::int64_t>>());
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad group spec: ") + e.what());
    }
    throw parse_error("group spec must be an array or {\"invariant_factors\": [...]}");
}

inline json element_to_json(const FabGroup& g, ElemIndex e) {
    return json(g.element(e).coords);
}

inline ElemIndex element_from_json(const FabGroup& g, const json& j) {
    if (!j.is_array()) throw parse_error("element must be an integer array");
    Element e;
    try {
        e.coords = j.get<std::vector<std::int64_t>>();
    } catch (const json::exception& ex) {
        throw parse_error(std::string("bad element: ") + ex.what());
    }
    return g.index(e); // element_domain_error on out-of-range coords
}

inline json subset_to_json(const FabGroup& g, const Subset& s) {
    json out = json::array();
    for (ElemIndex e : s.elems) out.push_back(element_to_json(g, e));
    return out;
}

inline Subset subset_from_json(const FabGroup& g, const json& j) {
    if (!j.is_array()) throw parse_error("subset must be an array of elements");
    std::vector<ElemIndex> v;
    for (const json& e : j) v.push_back(element_from_json(g, e));
    return Subset::of(g, std::move(v));
}

inline json sequence_to_json(const FabGroup& g, const GSequence& s) {
    json out = json::array();
    for (ElemIndex e : s.elems) out.push_back(element_to_json(g, e));
    return out;
}

inline json elasticity_to_json(const Elasticity& e) {
    return json{{"elasticity", e.str()}};
}

/// Order class data plus the prime count over the conductor used by the
/// infinite-elasticity guard (default 1: a unique prime upstairs).
struct OrderClassInput {
    OrderClassData data;
    int primes_over_conductor = 1;
};

inline OrderClassInput order_class_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("order class data must be a JSON object");
    for (const char* key : {"group", "ker_tau", "p_class", "a"})
        if (!j.contains(key))
            throw parse_error(std::string("order class data misses \"") + key + "\"");
    FabGroup g = group_from_json(j.at("group"));
    Subset ker = subset_from_json(g, j.at("ker_tau"));
    require_subgroup(g, ker);
    int a;
    bool pp, cp;
    Element p_coords;
    try {
        a = j.at("a").get<int>();
        p_coords.coords = j.at("p_class").get<std::vector<std::int64_t>>();
        // flags may be omitted; they are forced by the data anyway
        QuotientResult q = quotient(g, ker);
        ElemIndex pc = q.group.index(p_coords);
        pp = j.value("p_principal", pc == q.group.zero());
        cp = j.value("conductor_principal", q.group.scalar(pc, a) == q.group.zero());
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad order class data: ") + e.what());
    }
    OrderClassInput out{make_order_class_data(std::move(g), Subgroup{ker, ker.elems}, p_coords, a,
                                              pp, cp),
                        1};
    try {
        out.primes_over_conductor = j.value("primes_over_conductor", 1);
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad primes_over_conductor: ") + e.what());
    }
    return out;
}

inline json order_class_to_json(const OrderClassInput& in) {
    return json{{"group", group_to_json(in.data.cl_r)},
                {"ker_tau", subset_to_json(in.data.cl_r, in.data.ker_tau.set)},
                {"p_class", json(in.data.cl_max.element(in.data.p_class).coords)},
                {"a", in.data.a},
                {"p_principal", in.data.p_principal},
                {"conductor_principal", in.data.conductor_principal},
                {"primes_over_conductor", in.primes_over_conductor}};
}

/// {"d":..,"p":..,"a":..} with optional "h", "p_principal" and a supplied
/// ladder {"group":...,"kernels":[...],"p_fiber":[...]}.
struct QuadInput {
    std::int64_t d = 0, p = 0;
    int a = 1;
    std::optional<long long> h;
    std::optional<bool> p_principal;
    std::optional<LadderData> ladder;
};

inline QuadInput quad_input_from_json(const json& j) {
    if (!j.is_object()) throw parse_error("quadratic spec must be a JSON object");
    for (const char* key : {"d", "p", "a"})
        if (!j.contains(key)) throw parse_error(std::string("quadratic spec misses \"") + key + "\"");
    QuadInput in;
    try {
        in.d = j.at("d").get<std::int64_t>();
        in.p = j.at("p").get<std::int64_t>();
        in.a = j.at("a").get<int>();
        if (j.contains("h")) in.h = j.at("h").get<long long>();
        if (j.contains("p_principal")) in.p_principal = j.at("p_principal").get<bool>();
    } catch (const json::exception& e) {
        throw parse_error(std::string("bad quadratic spec: ") + e.what());
    }
    if (j.contains("ladder")) {
        const json& lj = j.at("ladder");
        if (!lj.is_object() || !lj.contains("group") || !lj.contains("kernels"))
            throw parse_error("ladder block needs \"group\" and \"kernels\"");
        LadderData lad;
        lad.cl = group_from_json(lj.at("group"));
        if (!lj.at("kernels").is_array()) throw parse_error("ladder kernels must be an array");
        for (const json& k : lj.at("kernels")) lad.kernel.push_back(subset_from_json(lad.cl, k));
        if (lj.contains("p_fiber")) lad.p_fiber = subset_from_json(lad.cl, lj.at("p_fiber"));
        in.ladder = std::move(lad);
    }
    return in;
}

} // namespace dav
