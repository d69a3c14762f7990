// r-suitability certificates: construction rules (positive torus knots,
// destabilization, Whitehead doubles, connected sums, winding-one
// satellites) and the invariant consequences every certificate emits.

#pragma once

#include <utility>

#include "knotcert/expr.hpp"
#include "knotcert/facts.hpp"

namespace knotcert {

inline long long ceil_div(long long a, long long b) {
    return a / b + ((a % b != 0 && (a > 0) == (b > 0)) ? 1 : 0);
}

inline long long floor_div(long long a, long long b) {
    return a / b - ((a % b != 0 && (a > 0) != (b > 0)) ? 1 : 0);
}

inline bool is_finite(long long v) { return v > NEG_INF && v < POS_INF; }

// Positive torus knots: the maximal-tb representative has tb = 2g-1, rot = 0,
// so T(p,q) is ((p-1)(q-1)-1)-suitable with g4 = (p-1)(q-1)/2 exactly.
inline SuitCert suit_positive_torus(int p, int q, FactStore& st) {
    KnotExpr e = KnotExpr::torus(p, q);  // validates coprimality and range
    long long g = static_cast<long long>(p - 1) * (q - 1) / 2;
    int r = (p - 1) * (q - 1) - 1;
    int t = st.arena().add("suit-torus", to_string(e) + " is " + std::to_string(r) +
                                             "-suitable, g4 = " + std::to_string(g));
    Facts& f = st.facts_for(e);
    f.g4.tighten_lo(g, t);
    f.g4.tighten_hi(g, t);
    SuitCert c{e, r, t, {}};
    return c;
}

inline SuitCert suit_destab(const SuitCert& c, int k, TraceArena& arena) {
    if (k > c.r)
        throw RuleError("suit_destab: target " + std::to_string(k) + " exceeds certified " +
                        std::to_string(c.r));
    if (k == c.r) return c;
    SuitCert d = c;
    d.r = k;
    d.trace = arena.add("suit-destab",
                        std::to_string(c.r) + "-suitable gives " + std::to_string(k) +
                            "-suitable for " + to_string(c.expr),
                        {c.trace});
    return d;
}

// The untwisted positive Whitehead double of an r-suitable knot with r >= 0
// is 1-suitable, with g4 = tau = 1.
inline SuitCert suit_wh(const SuitCert& c, FactStore& st) {
    if (c.r < 0)
        throw RuleError("suit_wh: companion certificate has r = " + std::to_string(c.r) +
                        ", need r >= 0");
    KnotExpr e = KnotExpr::wh(c.expr);
    int t = st.arena().add("suit-wh", to_string(e) + " is 1-suitable, g4 = tau = 1", {c.trace});
    Facts& f = st.facts_for(e);
    f.g4.tighten_lo(1, t, c.caveats);
    f.g4.tighten_hi(1, t, c.caveats);
    f.tau.tighten_lo(1, t, c.caveats);
    f.tau.tighten_hi(1, t, c.caveats);
    return SuitCert{e, 1, t, c.caveats};
}

// K r-suitable and J k-suitable give K#J (r+k+1)-suitable, with g4 adding
// exactly when both summands' g4 are exact.
inline SuitCert suit_sum(const SuitCert& a, const SuitCert& b, const Registry& reg,
                         FactStore& st) {
    KnotExpr e = normalize(KnotExpr::sum({a.expr, b.expr}), reg);
    int r = a.r + b.r + 1;
    std::set<std::string> cav = a.caveats;
    cav.insert(b.caveats.begin(), b.caveats.end());
    int t = st.arena().add("suit-sum",
                           to_string(e) + " is " + std::to_string(r) + "-suitable",
                           {a.trace, b.trace});
    const Interval& ga = st.facts_for(a.expr).g4;
    const Interval& gb = st.facts_for(b.expr).g4;
    if (ga.exact() && gb.exact()) {
        Facts& f = st.facts_for(e);
        long long g = ga.lo.value + gb.lo.value;
        std::set<std::string> c2 = cav;
        auto gc = ga.caveats();
        c2.insert(gc.begin(), gc.end());
        gc = gb.caveats();
        c2.insert(gc.begin(), gc.end());
        int tg = st.arena().add("suit-sum-g4-additive",
                                "g4 adds exactly under certified connected sum: " +
                                    std::to_string(g),
                                {t, ga.lo.trace, gb.lo.trace});
        f.g4.tighten_lo(g, tg, c2);
        f.g4.tighten_hi(g, tg, c2);
    }
    return SuitCert{e, r, t, cav};
}

// An (r+m)-suitable companion and a winding-one pattern with a certified
// (m, rho) pair and exact pattern genus 0 < g4(P) <= (m+rho)/2 give an
// (r+m)-suitable r-twisted satellite with g4 adding exactly.
inline SuitCert suit_satellite(const SuitCert& c, const PatternRef& pref, const Registry& reg,
                               std::pair<int, int> leg, int r, FactStore& st) {
    int m = leg.first, rho = leg.second;
    if (m < 0) throw RuleError("suit_satellite: pattern pair needs tb >= 0");
    if (c.r != r + m)
        throw RuleError("suit_satellite: companion certificate at " + std::to_string(c.r) +
                        ", need r+m = " + std::to_string(r + m));
    PatternDatum P = resolve_pattern(pref, reg);
    if (P.w != 1)
        throw RuleError("suit_satellite: unsupported winding number " + std::to_string(P.w));
    if (!P.leg_pairs.count({m, rho}))
        throw RuleError("suit_satellite: pattern " + P.name + " has no certified pair (" +
                        std::to_string(m) + "," + std::to_string(rho) + ")");
    if (!P.g4_exact())
        throw RuleError("suit_satellite: pattern genus of " + P.name + " not known exactly");
    long long gp = *P.g4_lo;
    if (gp <= 0) throw RuleError("suit_satellite: g4(P) > 0 required");
    if (2 * gp > m + rho)
        throw RuleError("suit_satellite: g4(P) <= (m+rho)/2 required");
    KnotExpr e = normalize(KnotExpr::sat(pref, r, c.expr), reg);
    int t = st.arena().add("suit-satellite",
                           to_string(e) + " is " + std::to_string(r + m) +
                               "-suitable via pattern pair (" + std::to_string(m) + "," +
                               std::to_string(rho) + ")",
                           {c.trace});
    const Interval& gk = st.facts_for(c.expr).g4;
    Facts& f = st.facts_for(e);
    if (is_finite(gk.lo.value)) {
        int tg = st.arena().add("suit-satellite-g4",
                                "g4 = g4(companion) + " + std::to_string(gp) + " exactly",
                                {t, gk.lo.trace});
        f.g4.tighten_lo(gk.lo.value + gp, tg, c.caveats);
    }
    if (is_finite(gk.hi.value)) {
        int tg = st.arena().add("suit-satellite-g4",
                                "g4 = g4(companion) + " + std::to_string(gp) + " exactly",
                                {t, gk.hi.trace});
        f.g4.tighten_hi(gk.hi.value + gp, tg, c.caveats);
    }
    return SuitCert{e, r + m, t, c.caveats};
}

// A topologically slice r-suitable knot: the connected sum of
// max{1, ceil((r+1)/2)} copies of Wh(T(2,3)), certified via the Whitehead,
// sum and destabilization rules.
inline std::pair<KnotExpr, SuitCert> topologically_slice_rsuitable(int r, const Registry& reg,
                                                                   FactStore& st) {
    long long copies = std::max<long long>(1, ceil_div(r + 1, 2));
    SuitCert trefoil = suit_positive_torus(2, 3, st);
    SuitCert one = suit_wh(trefoil, st);
    SuitCert acc = one;
    for (long long i = 1; i < copies; ++i) acc = suit_sum(acc, one, reg, st);
    SuitCert out = suit_destab(acc, r, st.arena());
    return {out.expr, out};
}

// Emits every invariant consequence of a certificate into the store:
// the g4 lower bound ceil((r+1)/2) (which doubles as the audit that
// r <= 2*g4 - 1, contradicting otherwise), the linkage 2*tau = s = 2*g4,
// and the witness (r, 2*g4 - 1 - r) once g4 is exact.
inline bool consequences(const SuitCert& c, FactStore& st) {
    bool changed = false;
    Facts& f = st.facts_for(c.expr);

    long long floor_bound = ceil_div(c.r + 1, 2);
    int t = st.arena().add("suitable-range-bound",
                           std::to_string(c.r) + "-suitable forces r <= 2*g4 - 1, so g4 >= " +
                               std::to_string(floor_bound),
                           {c.trace});
    changed |= f.g4.tighten_lo(floor_bound, t, c.caveats);

    // 2*tau = s = 2*g4.
    auto link = [&](Interval& dst, const Interval& src, long long mul_num, long long mul_den,
                    const char* what) {
        if (is_finite(src.lo.value)) {
            long long v = ceil_div(src.lo.value * mul_num, mul_den);
            int tl = st.arena().add("suit-eq-link", std::string(what) + " lower transfer",
                                    {c.trace, src.lo.trace});
            std::set<std::string> cav = c.caveats;
            cav.insert(src.lo.caveats.begin(), src.lo.caveats.end());
            changed |= dst.tighten_lo(v, tl, cav);
        }
        if (is_finite(src.hi.value)) {
            long long v = floor_div(src.hi.value * mul_num, mul_den);
            int th = st.arena().add("suit-eq-link", std::string(what) + " upper transfer",
                                    {c.trace, src.hi.trace});
            std::set<std::string> cav = c.caveats;
            cav.insert(src.hi.caveats.begin(), src.hi.caveats.end());
            changed |= dst.tighten_hi(v, th, cav);
        }
    };
    link(f.tau, f.g4, 1, 1, "tau = g4");
    link(f.g4, f.tau, 1, 1, "g4 = tau");
    link(f.s, f.g4, 2, 1, "s = 2*g4");
    link(f.g4, f.s, 1, 2, "g4 = s/2");

    if (f.g4.exact() && is_finite(f.g4.lo.value)) {
        LegWitness w;
        w.tb = c.r;
        w.rot = static_cast<int>(2 * f.g4.lo.value - 1 - c.r);
        w.caveats = c.caveats;
        auto gc = f.g4.caveats();
        w.caveats.insert(gc.begin(), gc.end());
        w.trace = st.arena().add("suit-witness",
                                 "certificate realizes witness (" + std::to_string(w.tb) + "," +
                                     std::to_string(w.rot) + ")",
                                 {c.trace, f.g4.lo.trace});
        changed |= st.add_witness(c.expr, w);
    }
    return changed;
}

} // namespace knotcert
