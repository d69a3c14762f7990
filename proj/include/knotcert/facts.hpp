// The fact lattice: integer intervals with traced endpoints and caveat
// flags, Arf values, suitability certificates, and the per-expression fact
// store the propagation engine narrows toward its fixpoint.

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "knotcert/expr.hpp"
#include "knotcert/legendrian.hpp"
#include "knotcert/trace.hpp"

namespace knotcert {

inline constexpr long long NEG_INF = -(1LL << 60);
inline constexpr long long POS_INF = (1LL << 60);

inline std::string bound_str(long long v) {
    if (v <= NEG_INF) return "-inf";
    if (v >= POS_INF) return "+inf";
    return std::to_string(v);
}

// One interval endpoint: a value, the trace that derived it, and any caveat
// flags (e.g. "modulo-SPC4") the derivation picked up.
struct Bound {
    long long value = 0;
    int trace = -1;
    std::set<std::string> caveats;
};

// A closed integer interval that only ever narrows. Crossing endpoints is a
// contradiction and aborts with both derivations attached.
struct Interval {
    std::string label;  // e.g. "g4((torus 2 3))", used in diagnostics
    Bound lo{NEG_INF, -1, {}};
    Bound hi{POS_INF, -1, {}};

    bool exact() const { return lo.value == hi.value; }
    bool contains(long long v) const { return lo.value <= v && v <= hi.value; }

    bool tighten_lo(long long v, int trace, const std::set<std::string>& caveats = {}) {
        if (v <= lo.value) return false;
        if (v > hi.value)
            throw ContradictionError(label + ": lower bound " + bound_str(v) +
                                         " exceeds upper bound " + bound_str(hi.value),
                                     trace, hi.trace);
        lo = Bound{v, trace, caveats};
        return true;
    }

    bool tighten_hi(long long v, int trace, const std::set<std::string>& caveats = {}) {
        if (v >= hi.value) return false;
        if (v < lo.value)
            throw ContradictionError(label + ": upper bound " + bound_str(v) +
                                         " falls below lower bound " + bound_str(lo.value),
                                     trace, lo.trace);
        hi = Bound{v, trace, caveats};
        return true;
    }

    std::set<std::string> caveats() const {
        std::set<std::string> c = lo.caveats;
        c.insert(hi.caveats.begin(), hi.caveats.end());
        return c;
    }

    std::string to_string() const {
        if (exact()) return "= " + bound_str(lo.value);
        return "in [" + bound_str(lo.value) + ", " + bound_str(hi.value) + "]";
    }
};

struct ArfVal {
    enum class V { Unknown, Zero, One };
    V value = V::Unknown;
    int trace = -1;

    std::string to_string() const {
        switch (value) {
        case V::Zero: return "0";
        case V::One: return "1";
        default: return "unknown";
        }
    }
};

// An r-suitability certificate: the expression admits a Legendrian
// representative with tb = r and rot = 2*g4 - 1 - r.
struct SuitCert {
    KnotExpr expr;
    int r = 0;
    int trace = -1;
    std::set<std::string> caveats;
};

// All facts known about one (normalized) expression.
struct Facts {
    Interval g4, tau, s;
    std::map<int, Interval> gsh;  // per shake parameter r
    Bound tb_lo{NEG_INF, -1, {}};
    std::vector<LegWitness> witnesses;  // kept Pareto-maximal
    std::vector<SuitCert> certs;
    ArfVal arf;
};

class FactStore {
public:
    explicit FactStore(TraceArena& arena) : arena_(&arena) {}

    TraceArena& arena() { return *arena_; }

    Facts& facts_for(const KnotExpr& e) {
        std::string key = to_string(e);
        auto it = by_expr_.find(key);
        if (it != by_expr_.end()) return it->second;
        Facts f;
        f.g4 = Interval{"g4(" + key + ")", Bound{0, -1, {}}, Bound{POS_INF, -1, {}}};
        f.tau = Interval{"tau(" + key + ")"};
        f.s = Interval{"s(" + key + ")"};
        return by_expr_.emplace(key, std::move(f)).first->second;
    }

    Interval& gsh_for(const KnotExpr& e, int r) {
        Facts& f = facts_for(e);
        auto it = f.gsh.find(r);
        if (it != f.gsh.end()) return it->second;
        Interval iv{"gsh^" + std::to_string(r) + "(" + to_string(e) + ")",
                    Bound{0, -1, {}}, Bound{POS_INF, -1, {}}};
        return f.gsh.emplace(r, std::move(iv)).first->second;
    }

    bool add_witness(const KnotExpr& e, const LegWitness& w) {
        Facts& f = facts_for(e);
        for (const auto& k : f.witnesses)
            if (reachable(k, w.tb, w.rot)) return false;
        f.witnesses.push_back(w);
        f.witnesses = pareto_prune(std::move(f.witnesses));
        return true;
    }

    bool add_cert(const KnotExpr& e, const SuitCert& c) {
        Facts& f = facts_for(e);
        for (const auto& k : f.certs)
            if (k.r >= c.r) return false;  // destabilization subsumes lower r
        // A certificate at r subsumes every k <= r via destabilization, so
        // only the maximal one is kept.
        f.certs.assign(1, c);
        return true;
    }

    bool set_arf(const KnotExpr& e, ArfVal::V v, int trace) {
        Facts& f = facts_for(e);
        if (f.arf.value == v) return false;
        if (f.arf.value != ArfVal::V::Unknown)
            throw ContradictionError("arf(" + to_string(e) + "): conflicting values", trace,
                                     f.arf.trace);
        f.arf = ArfVal{v, trace};
        return true;
    }

    bool raise_tb_lo(const KnotExpr& e, long long v, int trace,
                     const std::set<std::string>& caveats = {}) {
        Facts& f = facts_for(e);
        if (v <= f.tb_lo.value) return false;
        f.tb_lo = Bound{v, trace, caveats};
        return true;
    }

    const std::map<std::string, Facts>& all() const { return by_expr_; }
    std::map<std::string, Facts>& all() { return by_expr_; }

    // Trace-free summary of every numeric fact; two stores with equal
    // signatures carry the same mathematical content.
    std::string signature() const {
        std::string out;
        for (const auto& [key, f] : by_expr_) {
            out += key + "|g4 " + f.g4.to_string() + "|tau " + f.tau.to_string() + "|s " +
                   f.s.to_string();
            for (const auto& [r, iv] : f.gsh)
                out += "|gsh^" + std::to_string(r) + " " + iv.to_string();
            out += "|tb_lo " + bound_str(f.tb_lo.value);
            out += "|arf " + f.arf.to_string();
            out += "|wits";
            for (const auto& w : f.witnesses)
                out += " (" + std::to_string(w.tb) + "," + std::to_string(w.rot) + ")";
            out += "|certs";
            for (const auto& c : f.certs) out += " " + std::to_string(c.r);
            out += "\n";
        }
        return out;
    }

private:
    TraceArena* arena_;
    std::map<std::string, Facts> by_expr_;
};

} // namespace knotcert
