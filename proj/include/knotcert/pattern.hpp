// Pattern data: certified facts about satellite patterns, the pattern
// registry (JSON-backed), and the composition/twist algebra on pattern data.

#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "knotcert/laurent.hpp"
#include "knotcert/trace.hpp"

namespace knotcert {

// What is known about P_t(U) for a given twist t.
struct TildeTwistInfo {
    std::optional<std::string> expr_text; // expression naming P_t(U), when one exists
    std::optional<bool> slice;
    std::optional<bool> ribbon;
    std::optional<LaurentPoly> alexander;
};

// Certified data for a satellite pattern. Optional fields left empty mean
// "no information", never zero.
struct PatternDatum {
    std::string name;
    int w = 0;                                // algebraic winding number
    std::optional<int> n_geom;                // geometric winding number, >= |w|
    std::optional<long long> g4_lo, g4_hi;    // pattern slice genus interval
    std::set<std::pair<int, int>> leg_pairs;  // certified (tb, rot) pattern diagrams
    std::optional<bool> tilde_slice;
    std::optional<bool> tilde_ribbon;
    std::optional<bool> meridian_ng;          // meridian normally generated by torus meridian
    std::map<int, TildeTwistInfo> tilde_twists;

    bool g4_exact() const { return g4_lo && g4_hi && *g4_lo == *g4_hi; }
};

// A pattern-level Legendrian pair (tb, rot) must have tb == rot (mod 2)
// exactly when the winding number is odd.
inline bool pattern_pair_parity_ok(int w, int tb, int rot) {
    bool same_parity = ((tb - rot) % 2) == 0;
    bool w_odd = (w % 2) != 0;
    return same_parity == w_odd;
}

// Composition: only the winding number survives (it multiplies); everything
// else is not derivable and is left unknown.
inline PatternDatum compose_patterns(const PatternDatum& p, const PatternDatum& q) {
    PatternDatum r;
    r.name = "(" + p.name + "*" + q.name + ")";
    r.w = p.w * q.w;
    return r;
}

// Twisting preserves the winding numbers and the pattern slice genus; the
// tilde flags are replaced by whatever is recorded for P_t(U), and the
// Legendrian pairs are dropped.
inline PatternDatum twist_pattern(const PatternDatum& p, int t) {
    if (t == 0) return p;
    PatternDatum r;
    r.name = p.name + "_{" + std::to_string(t) + "}";
    r.w = p.w;
    r.n_geom = p.n_geom;
    r.g4_lo = p.g4_lo;
    r.g4_hi = p.g4_hi;
    auto it = p.tilde_twists.find(t);
    if (it != p.tilde_twists.end()) {
        r.tilde_slice = it->second.slice;
        r.tilde_ribbon = it->second.ribbon;
        TildeTwistInfo shifted = it->second;
        r.tilde_twists[0] = shifted;
    }
    return r;
}

class Registry {
public:
    Registry() = default;

    static Registry from_json(const nlohmann::json& j) {
        Registry reg;
        for (const auto& entry : j) {
            PatternDatum d;
            d.name = entry.at("name").get<std::string>();
            d.w = entry.at("w").get<int>();
            if (!entry.at("n_geom").is_null()) d.n_geom = entry.at("n_geom").get<int>();
            if (!entry.at("g4_lo").is_null()) d.g4_lo = entry.at("g4_lo").get<long long>();
            if (!entry.at("g4_hi").is_null()) d.g4_hi = entry.at("g4_hi").get<long long>();
            for (const auto& pr : entry.at("leg_pairs"))
                d.leg_pairs.insert({pr.at(0).get<int>(), pr.at(1).get<int>()});
            if (!entry.at("tilde_slice").is_null()) d.tilde_slice = entry.at("tilde_slice").get<bool>();
            if (!entry.at("tilde_ribbon").is_null()) d.tilde_ribbon = entry.at("tilde_ribbon").get<bool>();
            if (!entry.at("meridian_ng").is_null()) d.meridian_ng = entry.at("meridian_ng").get<bool>();
            if (entry.contains("tilde_twists") && !entry.at("tilde_twists").is_null()) {
                for (const auto& [key, val] : entry.at("tilde_twists").items()) {
                    TildeTwistInfo info;
                    if (val.contains("expr") && !val.at("expr").is_null())
                        info.expr_text = val.at("expr").get<std::string>();
                    if (val.contains("slice") && !val.at("slice").is_null())
                        info.slice = val.at("slice").get<bool>();
                    if (val.contains("ribbon") && !val.at("ribbon").is_null())
                        info.ribbon = val.at("ribbon").get<bool>();
                    if (val.contains("alexander") && !val.at("alexander").is_null()) {
                        LaurentPoly::Coeffs c;
                        for (const auto& term : val.at("alexander"))
                            c[term.at(0).get<int>()] = term.at(1).get<long long>();
                        info.alexander = LaurentPoly(std::move(c));
                    }
                    d.tilde_twists[std::stoi(key)] = info;
                }
            }
            reg.add(std::move(d));
        }
        return reg;
    }

    static Registry from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open registry file: " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }

    void add(PatternDatum d) { patterns_[d.name] = std::move(d); }

    bool contains(const std::string& name) const { return patterns_.count(name) > 0; }

    const PatternDatum& at(const std::string& name) const {
        auto it = patterns_.find(name);
        if (it == patterns_.end()) throw RuleError("unknown pattern name: " + name);
        return it->second;
    }

    const std::map<std::string, PatternDatum>& patterns() const { return patterns_; }

    // Audits every entry; returns one diagnostic string per violation.
    std::vector<std::string> validate() const {
        std::vector<std::string> diags;
        for (const auto& [name, d] : patterns_) {
            if (d.tilde_ribbon && *d.tilde_ribbon && d.tilde_slice && !*d.tilde_slice)
                diags.push_back(name + ": tilde_ribbon requires tilde_slice");
            if (d.n_geom && *d.n_geom < std::abs(d.w))
                diags.push_back(name + ": n_geom below |w|");
            if (d.g4_lo && d.g4_hi && *d.g4_lo > *d.g4_hi)
                diags.push_back(name + ": empty g4 interval");
            for (const auto& [tb, rot] : d.leg_pairs)
                if (!pattern_pair_parity_ok(d.w, tb, rot))
                    diags.push_back(name + ": leg pair (" + std::to_string(tb) + "," +
                                    std::to_string(rot) + ") violates the parity rule for w=" +
                                    std::to_string(d.w));
        }
        return diags;
    }

private:
    std::map<std::string, PatternDatum> patterns_;
};

// The registry shipped with the tool: the trivial core pattern, the Mazur
// pattern, and the r0/r1/r2 satellite patterns whose zero-twist closures
// are ribbon.
inline Registry builtin_registry() {
    nlohmann::json j = nlohmann::json::parse(R"([
      {"name": "core", "w": 1, "n_geom": 1, "g4_lo": 0, "g4_hi": 0,
       "leg_pairs": [[-1, 0]],
       "tilde_slice": true, "tilde_ribbon": true, "meridian_ng": true,
       "tilde_twists": {"0": {"expr": "unknot", "slice": true, "ribbon": true,
                              "alexander": [[0, 1]]}}},
      {"name": "mazur", "w": 1, "n_geom": 3, "g4_lo": 1, "g4_hi": 1,
       "leg_pairs": [[2, 0], [1, 1], [0, 2]],
       "tilde_slice": true, "tilde_ribbon": true, "meridian_ng": true,
       "tilde_twists": {"0": {"expr": "unknot", "slice": true, "ribbon": true,
                              "alexander": [[0, 1]]}}},
      {"name": "r0", "w": 1, "n_geom": null, "g4_lo": null, "g4_hi": null,
       "leg_pairs": [],
       "tilde_slice": true, "tilde_ribbon": true, "meridian_ng": true,
       "tilde_twists": {"0": {"expr": null, "slice": true, "ribbon": true,
                              "alexander": null}}},
      {"name": "r1", "w": 1, "n_geom": null, "g4_lo": null, "g4_hi": null,
       "leg_pairs": [],
       "tilde_slice": true, "tilde_ribbon": true, "meridian_ng": true,
       "tilde_twists": {"0": {"expr": null, "slice": true, "ribbon": true,
                              "alexander": null}}},
      {"name": "r2", "w": 1, "n_geom": null, "g4_lo": null, "g4_hi": null,
       "leg_pairs": [],
       "tilde_slice": true, "tilde_ribbon": true, "meridian_ng": true,
       "tilde_twists": {"0": {"expr": null, "slice": true, "ribbon": true,
                              "alexander": null}}}
    ])");
    return Registry::from_json(j);
}

} // namespace knotcert
