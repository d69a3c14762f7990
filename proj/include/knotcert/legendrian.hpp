// Symbolic calculus of Legendrian witnesses: (tb, rot) pairs certifying that
// some Legendrian representative of a knot realizes those values, and the
// rules that transport witnesses through stabilization, connected sum,
// winding-one satellites, reversal and Whitehead doubling.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <utility>
#include <set>
#include <string>
#include <vector>

#include "knotcert/trace.hpp"

namespace knotcert {

struct LegWitness {
    int tb = 0;
    int rot = 0;
    int trace = -1;                 // derivation trace id, -1 if unattached
    std::set<std::string> caveats;  // e.g. "modulo-SPC4", carried downstream

    bool parity_ok() const { return ((tb + rot) % 2 + 2) % 2 == 1; }
};

inline bool operator<(const LegWitness& a, const LegWitness& b) {
    if (a.tb != b.tb) return a.tb < b.tb;
    return a.rot < b.rot;
}
inline bool operator==(const LegWitness& a, const LegWitness& b) {
    return a.tb == b.tb && a.rot == b.rot;
}

namespace detail {
inline void audit_parity(const LegWitness& w, const char* op) {
    if (!w.parity_ok())
        throw RuleError(std::string(op) + ": tb and rot must have different parities, got (" +
                        std::to_string(w.tb) + "," + std::to_string(w.rot) + ")");
}
} // namespace detail

// One stabilization: tb drops by one, rot moves by the chosen sign.
inline LegWitness stabilize(const LegWitness& w, int sign, TraceArena& arena) {
    if (sign != 1 && sign != -1) throw RuleError("stabilize: sign must be +1 or -1");
    LegWitness r = w;
    r.tb -= 1;
    r.rot += sign;
    r.trace = arena.add("stabilize",
                        "(" + std::to_string(w.tb) + "," + std::to_string(w.rot) + ") -> (" +
                            std::to_string(r.tb) + "," + std::to_string(r.rot) + ")",
                        w.trace >= 0 ? std::vector<int>{w.trace} : std::vector<int>{});
    detail::audit_parity(r, "stabilize");
    return r;
}

// Can (tb', rot') be reached from w by stabilizations alone?
inline bool reachable(const LegWitness& w, int tb2, int rot2) {
    int drop = w.tb - tb2;
    if (drop < 0) return false;
    int shift = rot2 - w.rot;
    if (std::abs(shift) > drop) return false;
    return ((shift - drop) % 2 + 2) % 2 == 0;
}

inline LegWitness connect_sum_witness(const LegWitness& a, const LegWitness& b,
                                      TraceArena& arena) {
    LegWitness r;
    r.tb = a.tb + b.tb + 1;
    r.rot = a.rot + b.rot;
    r.caveats = a.caveats;
    r.caveats.insert(b.caveats.begin(), b.caveats.end());
    std::vector<int> prem;
    if (a.trace >= 0) prem.push_back(a.trace);
    if (b.trace >= 0) prem.push_back(b.trace);
    r.trace = arena.add("connect-sum-witness",
                        "tb=" + std::to_string(a.tb) + "+" + std::to_string(b.tb) +
                            "+1, rot=" + std::to_string(a.rot) + "+" + std::to_string(b.rot),
                        std::move(prem));
    detail::audit_parity(r, "connect_sum_witness");
    return r;
}

// Winding-one satellite: pattern pair (tb_P, rot_P) rides on a companion
// witness. The companion must already be destabilized so that its tb equals
// the satellite twist being certified.
inline LegWitness satellite_witness(std::pair<int, int> pattern_pair, int w,
                                    const LegWitness& k, TraceArena& arena) {
    if (w != 1) throw RuleError("satellite_witness: unsupported winding number " +
                                std::to_string(w));
    LegWitness r;
    r.tb = pattern_pair.first + k.tb;
    r.rot = pattern_pair.second + k.rot;
    r.caveats = k.caveats;
    r.trace = arena.add("satellite-witness",
                        "pattern (" + std::to_string(pattern_pair.first) + "," +
                            std::to_string(pattern_pair.second) + ") on companion (" +
                            std::to_string(k.tb) + "," + std::to_string(k.rot) + ")",
                        k.trace >= 0 ? std::vector<int>{k.trace} : std::vector<int>{});
    detail::audit_parity(r, "satellite_witness");
    return r;
}

inline LegWitness reverse_witness(const LegWitness& w, TraceArena& arena) {
    LegWitness r = w;
    r.rot = -w.rot;
    r.trace = arena.add("reverse-witness",
                        "rot " + std::to_string(w.rot) + " -> " + std::to_string(r.rot),
                        w.trace >= 0 ? std::vector<int>{w.trace} : std::vector<int>{});
    return r;
}

// There is no rule transporting a witness through a mirror.
inline std::optional<LegWitness> mirror_witness(const LegWitness&) { return std::nullopt; }

// The untwisted positive Whitehead double admits a (1, 0) representative as
// soon as the companion has a representative with tb >= 0.
inline std::optional<LegWitness> wh_witness(const std::vector<LegWitness>& companion_wits,
                                            TraceArena& arena) {
    for (const auto& w : companion_wits) {
        if (w.tb >= 0) {
            LegWitness r;
            r.tb = 1;
            r.rot = 0;
            r.caveats = w.caveats;
            r.trace = arena.add("wh-witness",
                                "companion tb=" + std::to_string(w.tb) + " >= 0 gives (1,0)",
                                w.trace >= 0 ? std::vector<int>{w.trace} : std::vector<int>{});
            return r;
        }
    }
    return std::nullopt;
}

// Keeps only witnesses not reachable from another kept witness; reachable
// ones add no bound strength. Deterministic: sorted by (tb desc, |rot| desc).
inline std::vector<LegWitness> pareto_prune(std::vector<LegWitness> wits) {
    std::vector<LegWitness> kept;
    for (const auto& w : wits) {
        bool dominated = false;
        for (const auto& k : wits)
            if (!(k == w) && reachable(k, w.tb, w.rot)) { dominated = true; break; }
        if (dominated) continue;
        bool dup = false;
        for (const auto& k : kept)
            if (k == w) { dup = true; break; }
        if (!dup) kept.push_back(w);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

} // namespace knotcert
