// Shake-concordance certificates (p, q component counts stay odd), their
// arithmetic, and the peripheral-curve gluing algebra deciding when an
// iterated satellite equals the composed-pattern satellite.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotcert/engine.hpp"
#include "knotcert/expr.hpp"
#include "knotcert/facts.hpp"

namespace knotcert {

// A (p, q) r-shake concordance between two expressions: p components of the
// left shaking, q of the right one, both odd.
struct ShakeCert {
    int r = 0;
    KnotExpr left;
    KnotExpr right;
    long long p = 1;
    long long q = 1;
    std::set<std::string> caveats;
    int trace = -1;

    nlohmann::json to_json() const {
        return {{"r", r},         {"left", to_string(left)}, {"right", to_string(right)},
                {"p", p},         {"q", q},                  {"rule", trace},
                {"caveats", caveats}};
    }
};

namespace detail {
inline void check_odd(long long p, long long q, const char* op) {
    if (p < 1 || q < 1 || p % 2 == 0 || q % 2 == 0)
        throw RuleError(std::string(op) + ": component counts must be odd and positive, got (" +
                        std::to_string(p) + "," + std::to_string(q) + ")");
}
} // namespace detail

inline ShakeCert make_shake_cert(int r, KnotExpr left, KnotExpr right, long long p, long long q,
                                 std::set<std::string> caveats, int trace) {
    detail::check_odd(p, q, "shake_cert");
    return ShakeCert{r, std::move(left), std::move(right), p, q, std::move(caveats), trace};
}

inline ShakeCert symmetry(const ShakeCert& c, TraceArena& arena) {
    ShakeCert r = c;
    std::swap(r.left, r.right);
    std::swap(r.p, r.q);
    r.trace = arena.add("shake-symmetry", "swap sides of (" + std::to_string(c.p) + "," +
                                              std::to_string(c.q) + ") certificate",
                        {c.trace});
    return r;
}

// (p,1) followed by (m,1) at the same r composes to (p*m, 1).
inline ShakeCert compose_11(const ShakeCert& a, const ShakeCert& b, TraceArena& arena) {
    if (a.q != 1 || b.q != 1)
        throw RuleError("compose_11: both certificates must have q = 1");
    if (a.r != b.r)
        throw RuleError("compose_11: twist mismatch " + std::to_string(a.r) + " vs " +
                        std::to_string(b.r));
    if (!(a.right == b.left))
        throw RuleError("compose_11: endpoint mismatch, " + to_string(a.right) + " vs " +
                        to_string(b.left));
    ShakeCert c;
    c.r = a.r;
    c.left = a.left;
    c.right = b.right;
    c.p = a.p * b.p;
    c.q = 1;
    c.caveats = a.caveats;
    c.caveats.insert(b.caveats.begin(), b.caveats.end());
    c.trace = arena.add("shake-compose-11",
                        "(" + std::to_string(a.p) + ",1) o (" + std::to_string(b.p) +
                            ",1) = (" + std::to_string(c.p) + ",1)",
                        {a.trace, b.trace});
    detail::check_odd(c.p, c.q, "compose_11");
    return c;
}

// A winding-one pattern with slice closure makes its satellite (1, n_geom)
// r-shake concordant to the companion.
inline ShakeCert satellite_shake(const PatternRef& pref, const KnotExpr& K, int r,
                                 const Registry& reg, TraceArena& arena) {
    PatternDatum P = resolve_pattern(pref, reg);
    if (P.w != 1)
        throw RuleError("satellite_shake: pattern winding number must be 1, got " +
                        std::to_string(P.w));
    if (!P.tilde_slice || !*P.tilde_slice)
        throw RuleError("satellite_shake: pattern closure not certified slice");
    if (!P.n_geom)
        throw RuleError("satellite_shake: geometric winding number unknown");
    ShakeCert c;
    c.r = r;
    c.left = normalize(KnotExpr::sat(pref, r, K), reg);
    c.right = normalize(K, reg);
    c.p = 1;
    c.q = *P.n_geom;
    c.trace = arena.add("satellite-implies-shake",
                        to_string(c.left) + " is (1," + std::to_string(c.q) + ") " +
                            std::to_string(r) + "-shake concordant to " + to_string(c.right));
    detail::check_odd(c.p, c.q, "satellite_shake");
    return c;
}

// From a (2k+1, 2l+1) certificate between two satellites and (1, m)/(1, n)
// satellite certificates for their patterns, glue a (m(2k+1), n(2l+1))
// certificate between the companions.
inline ShakeCert glue_general(const ShakeCert& s, const ShakeCert& a, const ShakeCert& b,
                              TraceArena& arena) {
    if (a.p != 1 || b.p != 1)
        throw RuleError("glue_general: pattern certificates must have p = 1");
    if (a.r != s.r || b.r != s.r)
        throw RuleError("glue_general: twist mismatch");
    if (!(a.left == s.left))
        throw RuleError("glue_general: left satellite mismatch, " + to_string(a.left) + " vs " +
                        to_string(s.left));
    if (!(b.left == s.right))
        throw RuleError("glue_general: right satellite mismatch, " + to_string(b.left) + " vs " +
                        to_string(s.right));
    ShakeCert c;
    c.r = s.r;
    c.left = a.right;
    c.right = b.right;
    c.p = a.q * s.p;
    c.q = b.q * s.q;
    c.caveats = s.caveats;
    c.caveats.insert(a.caveats.begin(), a.caveats.end());
    c.caveats.insert(b.caveats.begin(), b.caveats.end());
    c.trace = arena.add("shake-glue",
                        "(" + std::to_string(c.p) + "," + std::to_string(c.q) +
                            ") between companions",
                        {s.trace, a.trace, b.trace});
    detail::check_odd(c.p, c.q, "glue_general");
    return c;
}

// An (m, 1) certificate to the unknot pins the r-shake genus at 0.
inline void shake_slice_cert(const ShakeCert& c, Engine& en) {
    if (c.q != 1) throw RuleError("shake_slice_cert: certificate must have q = 1");
    if (!(c.right == KnotExpr::unknot()))
        throw RuleError("shake_slice_cert: right side must be the unknot");
    int t = en.arena().add("shake-slice-from-cert",
                           to_string(c.left) + " is " + std::to_string(c.r) + "-shake slice",
                           {c.trace});
    en.store().gsh_for(normalize(c.left, en.registry()), c.r).tighten_hi(0, t, c.caveats);
}

// A ribbon pattern Q whose satellite Q_r(K) is certified slice makes K
// r-shake slice; the explicit certificate needs the geometric winding number.
inline std::optional<ShakeCert> from_slice(const PatternRef& qref, const KnotExpr& K, int r,
                                           Engine& en) {
    const Registry& reg = en.registry();
    PatternDatum Q = resolve_pattern(qref, reg);
    if (!Q.tilde_ribbon || !*Q.tilde_ribbon)
        throw RuleError("from_slice: pattern closure not certified ribbon");
    KnotExpr sat = normalize(KnotExpr::sat(qref, r, K), reg);
    const Facts& f = en.store().facts_for(sat);
    if (f.g4.hi.value != 0)
        throw RuleError("from_slice: no sliceness certificate for " + to_string(sat));
    std::set<std::string> cav = f.g4.hi.caveats;
    KnotExpr nk = normalize(K, reg);
    int t = en.arena().add("characterize-shake-slice",
                           to_string(nk) + " is " + std::to_string(r) +
                               "-shake slice via ribbon pattern",
                           {f.g4.hi.trace});
    en.store().gsh_for(nk, r).tighten_hi(0, t, cav);
    if (Q.w == 1 && Q.tilde_slice && *Q.tilde_slice && Q.n_geom && *Q.n_geom % 2 == 1) {
        ShakeCert c;
        c.r = r;
        c.left = nk;
        c.right = KnotExpr::unknot();
        c.p = *Q.n_geom;
        c.q = 1;
        c.caveats = cav;
        c.trace = t;
        return c;
    }
    return std::nullopt;
}

// Extends a certificate chain K ~ ... ~ J to Sat(P,r,K) ~ ... ~ Sat(P,r,J)
// by prepending/appending the satellite certificates for P on each end.
inline std::vector<ShakeCert> extend_chain_by_satellite(const PatternRef& pref,
                                                        const std::vector<ShakeCert>& chain,
                                                        const Registry& reg, TraceArena& arena) {
    if (chain.empty()) throw RuleError("extend_chain_by_satellite: empty chain");
    int r = chain.front().r;
    for (size_t i = 0; i < chain.size(); ++i) {
        if (chain[i].r != r) throw RuleError("extend_chain_by_satellite: twist mismatch in chain");
        if (i + 1 < chain.size() && !(chain[i].right == chain[i + 1].left))
            throw RuleError("extend_chain_by_satellite: endpoints do not link");
    }
    std::vector<ShakeCert> out;
    out.push_back(satellite_shake(pref, chain.front().left, r, reg, arena));
    for (const auto& c : chain) out.push_back(c);
    out.push_back(symmetry(satellite_shake(pref, chain.back().right, r, reg, arena), arena));
    return out;
}

// ---------------------------------------------------------------------------
// Peripheral-curve gluing algebra

// A Z-linear combination of peripheral curve symbols: m_i(P), l_i(P),
// m_o(P), l_o(P), likewise for Q, and mu(K), lambda(K).
using CurveClass = std::map<std::string, long long>;

inline CurveClass curve(const std::string& sym, long long c = 1) {
    CurveClass r;
    if (c != 0) r[sym] = c;
    return r;
}

inline CurveClass operator+(CurveClass a, const CurveClass& b) {
    for (const auto& [s, c] : b) {
        a[s] += c;
        if (a[s] == 0) a.erase(s);
    }
    return a;
}

inline CurveClass operator*(long long k, const CurveClass& a) {
    CurveClass r;
    if (k == 0) return r;
    for (const auto& [s, c] : a) r[s] = k * c;
    return r;
}

inline CurveClass operator-(const CurveClass& a, const CurveClass& b) { return a + (-1) * b; }

inline bool is_zero(const CurveClass& a) { return a.empty(); }

inline std::string to_string(const CurveClass& a) {
    if (a.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [s, c] : a) {
        if (!first) out += c < 0 ? " - " : " + ";
        else if (c < 0) out += "-";
        long long v = c < 0 ? -c : c;
        if (v != 1) out += std::to_string(v) + "*";
        out += s;
        first = false;
    }
    return out;
}

// The identifications at each interface torus of a satellite gluing, plus
// the curve representing the outer longitude.
struct GluingData {
    std::vector<std::pair<CurveClass, CurveClass>> identifications;
    CurveClass outer_longitude;
};

// Builds the peripheral identifications of E(P_s(Q_r(K))) (iterated) and of
// E((P_{s-r} * Q)_r(K)) (composed), in the interface order: K-meridian,
// K-longitude, P/Q-meridian, P/Q-longitude.
inline std::pair<GluingData, GluingData> build_gluings(int wP, int wQ, int r, int s) {
    GluingData it, co;
    long long wq2 = static_cast<long long>(wQ) * wQ;
    long long wp2 = static_cast<long long>(wP) * wP;

    it.identifications = {
        {curve("m_o(Q)"), curve("mu(K)")},
        {curve("l_o(Q)") - static_cast<long long>(r) * curve("m_o(Q)"), curve("lambda(K)")},
        {curve("m_o(P)"), curve("m_i(Q)")},
        {curve("l_o(P)") - static_cast<long long>(s) * curve("m_o(P)"),
         curve("l_i(Q)") - static_cast<long long>(r) * wq2 * curve("m_i(Q)")},
    };
    it.outer_longitude = curve("l_i(P)") - static_cast<long long>(s) * wp2 * curve("m_i(P)");

    co.identifications = {
        {curve("m_o(Q)"), curve("mu(K)")},
        {curve("l_o(Q)") - static_cast<long long>(r) * curve("m_o(Q)"), curve("lambda(K)")},
        {curve("m_o(P)"), curve("m_i(Q)")},
        {curve("l_o(P)") - static_cast<long long>(s - r) * curve("m_o(P)"), curve("l_i(Q)")},
    };
    co.outer_longitude =
        curve("l_i(P)") -
        wp2 * (static_cast<long long>(r) * wq2 + s - r) * curve("m_i(P)");

    return {it, co};
}

inline std::pair<GluingData, GluingData> build_gluings(const PatternDatum& P,
                                                       const PatternDatum& Q, int r, int s) {
    return build_gluings(P.w, Q.w, r, s);
}

struct GluingComparison {
    bool equal = true;
    CurveClass mismatch;  // difference class at the first failing interface
};

// Reduces both gluings to normal form (substituting the shared meridian
// identification m_o(P) ~ m_i(Q)) and compares interface by interface.
inline GluingComparison compare_gluings(int wP, int wQ, int r, int s) {
    auto [it, co] = build_gluings(wP, wQ, r, s);
    auto substitute = [](CurveClass c) {
        auto n = c.find("m_o(P)");
        if (n != c.end()) {
            long long k = n->second;
            c.erase(n);
            c = c + k * curve("m_i(Q)");
        }
        return c;
    };
    for (size_t i = 0; i < it.identifications.size(); ++i) {
        CurveClass di = substitute(it.identifications[i].first - it.identifications[i].second);
        CurveClass dc = substitute(co.identifications[i].first - co.identifications[i].second);
        CurveClass diff = di - dc;
        if (!is_zero(diff)) return {false, diff};
    }
    CurveClass diff = substitute(it.outer_longitude) - substitute(co.outer_longitude);
    if (!is_zero(diff)) return {false, diff};
    return {true, {}};
}

inline GluingComparison compare_gluings(const PatternDatum& P, const PatternDatum& Q, int r,
                                        int s) {
    return compare_gluings(P.w, Q.w, r, s);
}

} // namespace knotcert
