#pragma once

#include <iomanip>
#include <sstream>
#include <string>

#include "json.hpp"

#include "audit.hpp"
#include "constructions.hpp"
#include "search.hpp"
#include "turan.hpp"

namespace nimh {

using json = nlohmann::ordered_json;

inline json to_json(const TuranRecord& r) {
    json j;
    j["kind"] = r.kind;
    j["pattern_fingerprint"] = r.fingerprint;
    if (r.kind == "exstar") j["m"] = r.m;
    j["n"] = r.n;
    j["value"] = r.value;
    j["exact"] = r.exact;
    j["witnesses"] = json::array();
    for (const auto& w : r.witnesses) j["witnesses"].push_back(to_graph6(w));
    return j;
}

inline json to_json(const EdgeColoring& c) {
    json j;
    j["n"] = c.order();
    j["k"] = c.colours();
    j["colours"] = c.data();
    return j;
}

inline json to_json(const NimReport& r, const EdgeColoring& c) {
    json j;
    j["n"] = c.order();
    j["k"] = c.colours();
    j["nim_total"] = r.total;
    j["nim_per_colour"] = r.per_colour;
    j["nim_flags"] = r.flags;
    return j;
}

inline json to_json(const SearchReport& r) {
    json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["pattern"] = r.pattern;
    j["mode"] = r.mode;
    j["value"] = r.best;
    if (r.mode == "exact") {
        j["optimum_classes"] = r.optimum_classes;
        j["colourings_examined"] = r.nodes;
    } else {
        j["seed"] = r.seed;
        j["budget"] = r.budget;
        j["steps"] = r.steps;
        j["restarts"] = r.restarts;
        j["seed_state"] = r.seed_state;
        j["seed_state_value"] = r.seed_state_count;
    }
    j["colourings"] = json::array();
    for (const auto& c : r.colorings) j["colourings"].push_back(to_json(c));
    return j;
}

inline json to_json(const OverlayCertificate& cert) {
    json j;
    j["ex_value"] = cert.ex_value;
    j["permutations"] = cert.permutations;
    j["overlaps"] = json::array();
    for (const auto& o : cert.overlaps) j["overlaps"].push_back({{"i", o.i}, {"j", o.j}, {"size", o.size}});
    j["overlap_total"] = cert.overlap_total;
    j["expectation_bound"] = cert.expectation_bound;
    j["bound_met"] = cert.bound_met;
    j["attempts"] = cert.attempts;
    j["union_size"] = cert.union_size;
    return j;
}

inline json to_json(const StarDecomposition& d) {
    json j;
    j["t"] = d.t();
    j["S"] = d.S;
    j["stars"] = json::array();
    for (const auto& s : d.stars)
        j["stars"].push_back({{"colour", s.colour},
                              {"centre", s.centre},
                              {"leaves", s.leaves},
                              {"nim_partner", s.nim_partner},
                              {"full", s.full}});
    j["classes"] = json::array();
    for (const auto& vc : d.classes)
        j["classes"].push_back({{"vector", vc.key}, {"feasible", vc.feasible}, {"members", vc.members}});
    return j;
}

inline json to_json(const AuditReport& r, bool with_decomposition = false) {
    json j;
    j["audit"] = r.kind;
    j["n"] = r.n;
    j["k"] = r.k;
    j["h"] = r.h;
    j["pattern"] = r.pattern;
    j["nim_total"] = r.nim_total;
    j["nim_per_colour"] = r.nim_per_colour;
    j["t"] = r.decomposition.t();
    j["claims"] = json::array();
    for (const auto& v : r.claims)
        j["claims"].push_back({{"claim", v.claim},
                               {"measured", v.measured},
                               {"bound", v.bound},
                               {"slack", v.slack()},
                               {"instances", v.instances},
                               {"where", v.where},
                               {"pass", v.pass}});
    j["class_sizes"] = json::array();
    for (const auto& vc : r.decomposition.classes) j["class_sizes"].push_back(vc.members.size());
    if (r.kind == "auditk") {
        j["types"] = r.type_counts;
        j["b"] = r.b;
        j["n_star"] = r.n_star;
        j["n_star_bound"] = r.n_star_bound;
    }
    j["pass"] = r.pass;
    if (with_decomposition || !r.pass) j["decomposition"] = to_json(r.decomposition);
    if (!r.pass) j["counterexample"] = r.counterexample;
    return j;
}

inline json error_json(const Error& e) {
    json j;
    j["status"] = to_string(e.status());
    j["reason"] = e.reason();
    j["message"] = e.what();
    return j;
}

// Flattens a report into "key<TAB>value" lines; nested values stay as compact JSON.
inline std::string to_tabular(const json& j) {
    std::ostringstream out;
    if (j.contains("claims")) {
        out << std::left << std::setw(14) << "claim" << std::setw(12) << "measured" << std::setw(22) << "bound"
            << std::setw(10) << "instances" << "pass\n";
        for (const auto& v : j["claims"])
            out << std::setw(14) << v["claim"].get<std::string>() << std::setw(12) << v["measured"].dump()
                << std::setw(22) << v["bound"].dump() << std::setw(10) << v["instances"].dump()
                << (v["pass"].get<bool>() ? "yes" : "NO") << "\n";
    }
    for (const auto& [key, value] : j.items()) {
        if (key == "claims") continue;
        out << key << "\t" << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    }
    return out.str();
}

} // namespace nimh
