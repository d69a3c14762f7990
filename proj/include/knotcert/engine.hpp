// Fixpoint propagation of invariant facts (g4, tau, s, g_sh^r, TB lower
// bound, Arf) over a knot expression, plus the Alexander/Arf sub-engine,
// shake-slice verdicts and family tables.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotcert/expr.hpp"
#include "knotcert/facts.hpp"
#include "knotcert/front.hpp"
#include "knotcert/laurent.hpp"
#include "knotcert/legendrian.hpp"
#include "knotcert/suitability.hpp"

namespace knotcert {

inline const char* CAVEAT_SPC4 = "modulo-SPC4";

// A satellite expression seen through its pattern chain: x is the pattern
// `name` placed with `t_eff` total twists around `companion`. Composed
// pattern chains (produced by the nested-satellite collapse) are peeled one
// slot at a time, so the companion of an i-fold iterate is the (i-1)-fold
// iterate.
struct SatView {
    bool valid = false;
    std::string name;
    int t_eff = 0;
    KnotExpr companion;
};

namespace detail {
inline SatView decompose_pat(const PatternRef& p, int t, KnotExpr comp, const Registry& reg) {
    switch (p.kind) {
    case PatternRef::Kind::Name:
        return SatView{true, p.name, t, std::move(comp)};
    case PatternRef::Kind::Twist:
        return decompose_pat(p.parts[0], t + p.t, std::move(comp), reg);
    case PatternRef::Kind::Compose: {
        KnotExpr inner = normalize(KnotExpr::sat(p.parts[1], t, std::move(comp)), reg);
        return decompose_pat(p.parts[0], t, std::move(inner), reg);
    }
    }
    return SatView{};
}
} // namespace detail

inline SatView decompose_sat(const KnotExpr& x, const Registry& reg) {
    if (x.kind != KnotExpr::Kind::Sat) return SatView{};
    return detail::decompose_pat(x.pattern, x.twist, x.args[0], reg);
}

struct Verdict {
    enum class Kind { No, Certified, CertifiedModuloSPC4, Unknown };
    Kind kind = Kind::Unknown;
    std::string reason;
    std::set<std::string> caveats;

    std::string kind_str() const {
        switch (kind) {
        case Kind::No: return "No";
        case Kind::Certified: return "Certified";
        case Kind::CertifiedModuloSPC4: return "CertifiedModuloSPC4";
        default: return "Unknown";
        }
    }
};

// A characterization witness supplied by the user: a registry pattern Q with
// ribbon closure such that Q_r(e) has been certified slice (injected as an
// external g4 = 0 fact beforehand).
struct CharWitness {
    std::string pattern;
};

struct TableRow {
    int i = 0;
    Interval g4, tau, s;
    std::optional<Interval> gsh;
    std::set<std::string> caveats;
};

class Engine {
public:
    explicit Engine(const Registry& reg) : reg_(reg), store_(arena_) {}

    TraceArena& arena() { return arena_; }
    FactStore& store() { return store_; }
    const Registry& registry() const { return reg_; }

    // ----- external facts -------------------------------------------------

    // Audited on the next propagation via the suitability consequences.
    void inject_suit_cert(const KnotExpr& e, int r) {
        KnotExpr n = normalize(e, reg_);
        int t = arena_.add("external", to_string(n) + " asserted " + std::to_string(r) +
                                           "-suitable (user-supplied)");
        store_.add_cert(n, SuitCert{n, r, t, {}});
    }

    void inject_slice_cert(const KnotExpr& e) {
        KnotExpr n = normalize(e, reg_);
        int t = arena_.add("external", to_string(n) + " asserted slice (user-supplied)");
        store_.facts_for(n).g4.tighten_hi(0, t);
    }

    void inject_witness(const KnotExpr& e, int tb, int rot) {
        LegWitness w{tb, rot, -1, {}};
        if (!w.parity_ok())
            throw RuleError("external witness (" + std::to_string(tb) + "," +
                            std::to_string(rot) + ") violates the parity rule");
        KnotExpr n = normalize(e, reg_);
        w.trace = arena_.add("external", to_string(n) + " witness (" + std::to_string(tb) + "," +
                                             std::to_string(rot) + ") (user-supplied)");
        store_.add_witness(n, w);
    }

    void request_gsh(const KnotExpr& e, int r) { store_.gsh_for(normalize(e, reg_), r); }

    // ----- Alexander / Arf ------------------------------------------------

    std::optional<LaurentPoly> alexander(const KnotExpr& e) {
        auto it = alex_memo_.find(to_string(e));
        if (it != alex_memo_.end()) return it->second;
        std::optional<LaurentPoly> out;
        switch (e.kind) {
        case KnotExpr::Kind::Unknot:
            out = LaurentPoly::one();
            break;
        case KnotExpr::Kind::Torus:
            out = torus_alexander(e.p, e.q);
            break;
        case KnotExpr::Kind::Mirror:
        case KnotExpr::Kind::Reverse:
            out = alexander(e.args[0]);
            break;
        case KnotExpr::Kind::Wh:
            out = LaurentPoly::one();
            break;
        case KnotExpr::Kind::Sum: {
            LaurentPoly prod = LaurentPoly::one();
            bool all = true;
            for (const auto& a : e.args) {
                auto d = alexander(a);
                if (!d) { all = false; break; }
                prod = prod * *d;
            }
            if (all) out = prod;
            break;
        }
        case KnotExpr::Kind::Sat: {
            SatView v = decompose_sat(e, reg_);
            if (v.valid) {
                int w = reg_.at(v.name).w;
                if (w == 1 || w == -1) {
                    const auto& tw = reg_.at(v.name).tilde_twists;
                    auto t = tw.find(v.t_eff);
                    if (t != tw.end() && t->second.alexander) {
                        auto dk = alexander(v.companion);
                        if (dk) out = (*t->second.alexander) * *dk;
                    }
                }
            }
            break;
        }
        }
        alex_memo_[to_string(e)] = out;
        return out;
    }

    ArfVal arf(const KnotExpr& e) {
        auto delta = alexander(e);
        if (delta) {
            long long d = delta->determinant_abs() % 8;
            bool zero = (d == 1 || d == 7);
            int t = arena_.add("standard-background",
                              "arf(" + to_string(e) + ") from |det| = " +
                                  std::to_string(delta->determinant_abs()) + " mod 8");
            return ArfVal{zero ? ArfVal::V::Zero : ArfVal::V::One, t};
        }
        if (e.kind == KnotExpr::Kind::Mirror || e.kind == KnotExpr::Kind::Reverse)
            return arf(e.args[0]);
        if (e.kind == KnotExpr::Kind::Sum) {
            int sum = 0;
            std::vector<int> prem;
            for (const auto& a : e.args) {
                ArfVal v = arf(a);
                if (v.value == ArfVal::V::Unknown) return ArfVal{};
                sum += v.value == ArfVal::V::One ? 1 : 0;
                prem.push_back(v.trace);
            }
            int t = arena_.add("standard-background",
                              "arf additive mod 2 over connected sum", std::move(prem));
            return ArfVal{sum % 2 ? ArfVal::V::One : ArfVal::V::Zero, t};
        }
        return ArfVal{};
    }

    // ----- propagation ----------------------------------------------------

    // Runs the monotone rule set to its fixpoint over e and all its
    // subexpressions. shuffle_seed != 0 randomizes the per-iteration rule
    // application order (the fixpoint must not depend on it).
    void propagate(const KnotExpr& e, unsigned shuffle_seed = 0) {
        KnotExpr n = normalize(e, reg_);
        std::vector<KnotExpr> work = worklist(n);
        size_t cap = 10 * work.size() + 50;
        std::mt19937 rng(shuffle_seed);

        std::string before = store_.signature();
        for (size_t iter = 0;; ++iter) {
            if (iter > cap)
                throw RuleError("propagate: fixpoint not reached within iteration bound");
            std::vector<int> rule_order(n_rules_);
            for (int i = 0; i < n_rules_; ++i) rule_order[static_cast<size_t>(i)] = i;
            std::vector<size_t> expr_order(work.size());
            for (size_t i = 0; i < work.size(); ++i) expr_order[i] = i;
            if (shuffle_seed != 0) {
                std::shuffle(rule_order.begin(), rule_order.end(), rng);
                std::shuffle(expr_order.begin(), expr_order.end(), rng);
            }
            for (int ri : rule_order)
                for (size_t xi : expr_order) apply_rule(ri, work[xi]);
            std::string after = store_.signature();
            if (after == before) break;
            before = std::move(after);
        }
    }

    // ----- verdicts -------------------------------------------------------

    Verdict shake_slice_verdict(const KnotExpr& raw, int r,
                                std::optional<CharWitness> witness = std::nullopt) {
        KnotExpr e = normalize(raw, reg_);
        request_gsh(e, r);
        propagate(e);
        Facts& f = store_.facts_for(e);

        // Obstructions, strongest first.
        if (f.arf.value == ArfVal::V::One)
            return Verdict{Verdict::Kind::No, "arf = 1", {}};
        if (r == 0 && !f.tau.contains(0))
            return Verdict{Verdict::Kind::No, "0 not in tau interval " + f.tau.to_string(), {}};
        SatView v = decompose_sat(e, reg_);
        if (v.valid && v.t_eff == r) {
            PatternDatum Q = twist_pattern(reg_.at(v.name), 0);
            if (Q.w == 1 && Q.tilde_slice && *Q.tilde_slice) {
                if (arf(v.companion).value == ArfVal::V::One)
                    return Verdict{Verdict::Kind::No, "companion arf = 1", {}};
                if (r == 0) {
                    propagate(v.companion);
                    if (!store_.facts_for(v.companion).tau.contains(0))
                        return Verdict{Verdict::Kind::No,
                                       "companion tau interval " +
                                           store_.facts_for(v.companion).tau.to_string() +
                                           " omits 0",
                                       {}};
                }
            }
        }
        Interval& g = store_.gsh_for(e, r);
        if (g.lo.value >= 1)
            return Verdict{Verdict::Kind::No, "gsh^" + std::to_string(r) + " >= " +
                                                  bound_str(g.lo.value),
                           g.lo.caveats};

        // Satellites of the unknot by suitable patterns are r-shake slice in
        // a possibly exotic 4-ball.
        if (v.valid && v.t_eff == r && v.companion.kind == KnotExpr::Kind::Unknot) {
            const PatternDatum& P = reg_.at(v.name);
            if (P.w == 1 && P.meridian_ng && *P.meridian_ng && P.tilde_slice && *P.tilde_slice) {
                int t = arena_.add("newshakeslice",
                                   to_string(e) + " is " + std::to_string(r) +
                                       "-shake slice modulo SPC4");
                g.tighten_hi(0, t, {CAVEAT_SPC4});
                return Verdict{Verdict::Kind::CertifiedModuloSPC4,
                               "satellite of the unknot by pattern " + v.name, {CAVEAT_SPC4}};
            }
        }

        if (e.kind == KnotExpr::Kind::Unknot) {
            int t = arena_.add("trivial-shake-slice", "unknot is r-shake slice for every r");
            g.tighten_hi(0, t);
            return Verdict{Verdict::Kind::Certified, "unknot (trivial witness: core pattern)", {}};
        }
        if (witness) {
            const PatternDatum& Q = reg_.at(witness->pattern);
            if (!(Q.tilde_ribbon && *Q.tilde_ribbon))
                return Verdict{Verdict::Kind::Unknown,
                               "characterization witness invalid: pattern " + witness->pattern +
                                   " not certified ribbon", {}};
            KnotExpr qre = normalize(KnotExpr::sat(PatternRef::named(witness->pattern), r, e), reg_);
            const Facts& qf = store_.facts_for(qre);
            if (qf.g4.hi.value != 0)
                return Verdict{Verdict::Kind::Unknown,
                               "characterization witness invalid: no sliceness certificate for " +
                                   to_string(qre), {}};
            int t = arena_.add("characterize-shake-slice",
                               to_string(e) + " is " + std::to_string(r) +
                                   "-shake slice via ribbon pattern " + witness->pattern,
                               {qf.g4.hi.trace});
            auto cav = qf.g4.hi.caveats;
            g.tighten_hi(0, t, cav);
            return Verdict{Verdict::Kind::Certified,
                           "characterization witness: pattern " + witness->pattern, cav};
        }
        return Verdict{Verdict::Kind::Unknown, "no applicable rule", {}};
    }

    // ----- family tables --------------------------------------------------

    enum class TablePath { Auto, ClosedForm, PerTerm };

    std::vector<TableRow> family_table(const PatternRef& pref, const KnotExpr& base_raw, int r,
                                       int iters, TablePath path = TablePath::Auto) {
        if (path == TablePath::PerTerm) return table_per_term(pref, base_raw, r, iters);
        if (path == TablePath::ClosedForm) return table_closed_form(pref, base_raw, r, iters);
        try {
            return table_closed_form(pref, base_raw, r, iters);
        } catch (const RuleError&) {
            return table_per_term(pref, base_raw, r, iters);
        }
    }

    // ----- reports --------------------------------------------------------

    nlohmann::json report(const KnotExpr& e, const std::vector<int>& rs) {
        KnotExpr n = normalize(e, reg_);
        for (int r : rs) request_gsh(n, r);
        propagate(n);
        const Facts& f = store_.facts_for(n);
        auto iv = [](const Interval& i) {
            nlohmann::json j;
            j["lo"] = is_finite(i.lo.value) ? nlohmann::json(i.lo.value) : nlohmann::json();
            j["hi"] = is_finite(i.hi.value) ? nlohmann::json(i.hi.value) : nlohmann::json();
            j["lo_trace"] = i.lo.trace;
            j["hi_trace"] = i.hi.trace;
            j["caveats"] = i.caveats();
            return j;
        };
        nlohmann::json out;
        out["expr"] = to_string(n);
        out["g4"] = iv(f.g4);
        out["tau"] = iv(f.tau);
        out["s"] = iv(f.s);
        nlohmann::json gsh = nlohmann::json::object();
        for (const auto& [r, i] : f.gsh) gsh[std::to_string(r)] = iv(i);
        out["gsh"] = gsh;
        out["tb_lo"] =
            is_finite(f.tb_lo.value) ? nlohmann::json(f.tb_lo.value) : nlohmann::json();
        out["arf"] = f.arf.to_string();
        nlohmann::json wits = nlohmann::json::array();
        for (const auto& w : f.witnesses)
            wits.push_back({{"tb", w.tb}, {"rot", w.rot}, {"trace", w.trace}});
        out["witnesses"] = wits;
        nlohmann::json certs = nlohmann::json::array();
        for (const auto& c : f.certs)
            certs.push_back({{"r", c.r}, {"trace", c.trace}, {"caveats", c.caveats}});
        out["suitability"] = certs;
        return out;
    }

private:
    static constexpr int n_rules_ = 12;

    std::vector<KnotExpr> worklist(const KnotExpr& n) {
        std::vector<KnotExpr> all;
        collect_subexprs(n, all);
        // Peel pattern chains: each composed satellite adds its companion.
        for (size_t i = 0; i < all.size(); ++i) {
            SatView v = decompose_sat(all[i], reg_);
            if (v.valid && !(v.companion == all[i].args[0])) {
                bool seen = false;
                for (const auto& k : all)
                    if (k == v.companion) { seen = true; break; }
                if (!seen) collect_subexprs(v.companion, all);
            }
        }
        std::vector<KnotExpr> uniq;
        for (const auto& x : all) {
            bool seen = false;
            for (const auto& k : uniq)
                if (k == x) { seen = true; break; }
            if (!seen) uniq.push_back(x);
        }
        return uniq;
    }

    void apply_rule(int ri, const KnotExpr& x) {
        switch (ri) {
        case 0: rule_axioms(x); break;
        case 1: rule_slice_bennequin(x); break;
        case 2: rule_chain(x); break;
        case 3: rule_shake_bennequin(x); break;
        case 4: rule_gsh_le_g4(x); break;
        case 5: rule_suitability(x); break;
        case 6: rule_cert_collapse(x); break;
        case 7: rule_sum(x); break;
        case 8: rule_satellite(x); break;
        case 9: rule_shake_monotone(x); break;
        case 10: rule_symmetry(x); break;
        case 11: rule_tb(x); break;
        }
    }

    // R7 plus the structural axioms: unknot values, torus certificates, Arf.
    void rule_axioms(const KnotExpr& x) {
        Facts& f = store_.facts_for(x);
        if (x.kind == KnotExpr::Kind::Unknot) {
            int t = axiom_trace("unknot-axiom", "unknot has g4 = tau = s = 0");
            f.g4.tighten_hi(0, t);
            f.tau.tighten_lo(0, t);
            f.tau.tighten_hi(0, t);
            f.s.tighten_lo(0, t);
            f.s.tighten_hi(0, t);
            for (auto& [r, iv] : f.gsh) iv.tighten_hi(0, t);
            LegWitness w{-1, 0, t, {}};
            store_.add_witness(x, w);
            store_.add_cert(x, SuitCert{x, -1, t, {}});
        }
        if (x.kind == KnotExpr::Kind::Torus) {
            bool has = false;
            for (const auto& c : f.certs)
                if (c.r >= (x.p - 1) * (x.q - 1) - 1) has = true;
            if (!has) {
                SuitCert c = suit_positive_torus(x.p, x.q, store_);
                store_.add_cert(x, c);
            }
        }
        if (f.arf.value == ArfVal::V::Unknown) {
            ArfVal v = arf(x);
            if (v.value != ArfVal::V::Unknown) store_.set_arf(x, v.value, v.trace);
        }
    }

    // R1: each witness (t, rho) gives tau >= (t+|rho|+1)/2 and s >= t+|rho|+1.
    void rule_slice_bennequin(const KnotExpr& x) {
        Facts& f = store_.facts_for(x);
        for (const auto& w : f.witnesses) {
            long long b = w.tb + std::abs(w.rot) + 1;
            int t = arena_.add("slice-bennequin",
                              "witness (" + std::to_string(w.tb) + "," + std::to_string(w.rot) +
                                  ") bounds tau >= " + std::to_string(b / 2) + ", s >= " +
                                  std::to_string(b),
                              {w.trace});
            f.tau.tighten_lo(b / 2, t, w.caveats);
            f.s.tighten_lo(b, t, w.caveats);
        }
    }

    // R2: tau <= g4 and s <= 2*g4.
    void rule_chain(const KnotExpr& x) {
        Facts& f = store_.facts_for(x);
        if (is_finite(f.g4.hi.value)) {
            int t = arena_.add("tau-le-g4", "tau <= g4", {f.g4.hi.trace});
            f.tau.tighten_hi(f.g4.hi.value, t, f.g4.hi.caveats);
            int t2 = arena_.add("s-le-2g4", "s <= 2*g4", {f.g4.hi.trace});
            f.s.tighten_hi(2 * f.g4.hi.value, t2, f.g4.hi.caveats);
        }
        if (is_finite(f.tau.lo.value)) {
            int t = arena_.add("tau-le-g4", "g4 >= tau", {f.tau.lo.trace});
            f.g4.tighten_lo(f.tau.lo.value, t, f.tau.lo.caveats);
        }
        if (is_finite(f.s.lo.value)) {
            int t = arena_.add("s-le-2g4", "g4 >= s/2", {f.s.lo.trace});
            f.g4.tighten_lo(ceil_div(f.s.lo.value, 2), t, f.s.lo.caveats);
        }
    }

    // R3: a witness with tb >= r+1 bounds the r-shake genus from below.
    void rule_shake_bennequin(const KnotExpr& x) {
        Facts& f = store_.facts_for(x);
        for (auto& [r, iv] : f.gsh) {
            for (const auto& w : f.witnesses) {
                if (w.tb < r + 1) continue;
                long long b = ceil_div(w.tb + std::abs(w.rot) + 1, 2);
                int t = arena_.add("shake-bennequin",
                                  "witness (" + std::to_string(w.tb) + "," +
                                      std::to_string(w.rot) + ") with tb >= " +
                                      std::to_string(r + 1) + " bounds gsh^" +
                                      std::to_string(r) + " >= " + std::to_string(b),
                                  {w.trace});
                iv.tighten_lo(b, t, w.caveats);
            }
        }
    }

    // R4: gsh^r <= g4.
    void rule_gsh_le_g4(const KnotExpr& x) {
        Facts& f = store_.facts_for(x);
        for (auto& [r, iv] : f.gsh) {
            if (is_finite(f.g4.hi.value)) {
                int t = arena_.add("gsh-le-g4", "gsh^" + std::to_string(r) + " <= g4",
                                  {f.g4.hi.trace});
                iv.tighten_hi(f.g4.hi.value, t, f.g4.hi.caveats);
            }
            if (is_finite(iv.lo.value) && iv.lo.value > 0) {
                int t = arena_.add("gsh-le-g4", "g4 >= gsh^" + std::to_string(r), {iv.lo.trace});
                f.g4.tighten_lo(iv.lo.value, t, iv.lo.caveats);
            }
        }
    }

    // R5: suitability consequences, plus derivation of new certificates for
    // Whitehead doubles and satellites.
    void rule_suitability(const KnotExpr& x) {
        Facts& f = store_.facts_for(x);
        for (const auto& c : std::vector<SuitCert>(f.certs)) consequences(c, store_);

        if (x.kind == KnotExpr::Kind::Wh) {
            for (const auto& c : store_.facts_for(x.args[0]).certs) {
                if (c.r < 0) continue;
                SuitCert wc = suit_wh(c, store_);
                store_.add_cert(x, wc);
            }
        }
        if (x.kind == KnotExpr::Kind::Sat) {
            SatView v = decompose_sat(x, reg_);
            if (!v.valid) return;
            const PatternDatum& P = reg_.at(v.name);
            if (P.w != 1) return;
            for (const auto& c : store_.facts_for(v.companion).certs) {
                for (const auto& [m, rho] : P.leg_pairs) {
                    if (m < 0 || c.r < v.t_eff + m) continue;
                    if (!pattern_pair_parity_ok(P.w, m, rho)) continue;
                    try {
                        SuitCert down = suit_destab(c, v.t_eff + m, arena_);
                        SuitCert sc = suit_satellite(down, PatternRef::named(v.name), reg_,
                                                     {m, rho}, v.t_eff, store_);
                        if (sc.expr == x) store_.add_cert(x, sc);
                    } catch (const RuleError&) {
                        // Precondition not (yet) met; retried next iteration.
                    }
                }
            }
        }
    }

    // R6: an (r+1)-suitability certificate pins gsh^r = g4.
    void rule_cert_collapse(const KnotExpr& x) {
        Facts& f = store_.facts_for(x);
        for (auto& [r, iv] : f.gsh) {
            for (const auto& c : f.certs) {
                if (c.r < r + 1) continue;
                int t = arena_.add("shake-genus-equality",
                                  std::to_string(c.r) + "-suitable pins gsh^" +
                                      std::to_string(r) + " = g4",
                                  {c.trace});
                if (is_finite(f.g4.lo.value)) iv.tighten_lo(f.g4.lo.value, t, cav2(c, f.g4.lo));
                if (is_finite(f.g4.hi.value)) iv.tighten_hi(f.g4.hi.value, t, cav2(c, f.g4.hi));
                if (is_finite(iv.lo.value)) f.g4.tighten_lo(iv.lo.value, t, cav2(c, iv.lo));
                if (is_finite(iv.hi.value)) f.g4.tighten_hi(iv.hi.value, t, cav2(c, iv.hi));
            }
        }
    }

    // R8: connected sums — g4 subadditive, tau additive when exact, Legendrian
    // witnesses and suitability certificates combine.
    void rule_sum(const KnotExpr& x) {
        if (x.kind != KnotExpr::Kind::Sum) return;
        Facts& f = store_.facts_for(x);
        long long hi = 0, tau_lo = 0, tau_hi = 0;
        bool hi_ok = true, tau_ok = true;
        std::vector<int> hi_prem, tau_prem;
        std::set<std::string> hi_cav, tau_cav;
        for (const auto& a : x.args) {
            const Facts& fa = store_.facts_for(a);
            if (!is_finite(fa.g4.hi.value)) hi_ok = false;
            else {
                hi += fa.g4.hi.value;
                hi_prem.push_back(fa.g4.hi.trace);
                hi_cav.insert(fa.g4.hi.caveats.begin(), fa.g4.hi.caveats.end());
            }
            if (!fa.tau.exact() || !is_finite(fa.tau.lo.value)) tau_ok = false;
            else {
                tau_lo += fa.tau.lo.value;
                tau_hi += fa.tau.hi.value;
                tau_prem.push_back(fa.tau.lo.trace);
                auto c = fa.tau.caveats();
                tau_cav.insert(c.begin(), c.end());
            }
        }
        if (hi_ok) {
            int t = arena_.add("g4-subadditive", "g4 of sum <= " + std::to_string(hi),
                              std::move(hi_prem));
            f.g4.tighten_hi(hi, t, hi_cav);
        }
        if (tau_ok) {
            int t = arena_.add("tau-additive", "tau of sum = " + std::to_string(tau_lo),
                              std::move(tau_prem));
            f.tau.tighten_lo(tau_lo, t, tau_cav);
            f.tau.tighten_hi(tau_hi, t, tau_cav);
        }

        // Witnesses: fold the summands' Pareto sets.
        std::vector<LegWitness> acc = store_.facts_for(x.args[0]).witnesses;
        for (size_t i = 1; i < x.args.size(); ++i) {
            const auto& next = store_.facts_for(x.args[i]).witnesses;
            std::vector<LegWitness> merged;
            for (const auto& a : acc)
                for (const auto& b : next) merged.push_back(connect_sum_witness(a, b, arena_));
            acc = pareto_prune(std::move(merged));
            if (acc.empty()) break;
        }
        for (const auto& w : acc) store_.add_witness(x, w);

        // Certificates: fold via the sum rule when every summand has one.
        bool all_certs = true;
        for (const auto& a : x.args)
            if (store_.facts_for(a).certs.empty()) all_certs = false;
        if (all_certs) {
            SuitCert c = store_.facts_for(x.args[0]).certs.front();
            for (size_t i = 1; i < x.args.size(); ++i)
                c = suit_sum(c, store_.facts_for(x.args[i]).certs.front(), reg_, store_);
            if (c.expr == x) store_.add_cert(x, c);
        }

        // Arf additivity fallback is handled by arf() in rule_axioms.
    }

    // R9 + satellite witness transport.
    void rule_satellite(const KnotExpr& x) {
        if (x.kind != KnotExpr::Kind::Sat) return;
        SatView v = decompose_sat(x, reg_);
        if (!v.valid) return;
        const PatternDatum& P = reg_.at(v.name);
        Facts& f = store_.facts_for(x);
        const Facts& fk = store_.facts_for(v.companion);

        if ((P.w == 1 || P.w == -1) && P.g4_hi && is_finite(fk.g4.hi.value)) {
            long long hi = fk.g4.hi.value + *P.g4_hi;
            int t = arena_.add("satellite-g4-upper",
                              "g4 <= g4(companion) + " + std::to_string(*P.g4_hi),
                              {fk.g4.hi.trace});
            f.g4.tighten_hi(hi, t, fk.g4.hi.caveats);
        }

        if (P.w == 1) {
            for (const auto& wk : fk.witnesses) {
                if (wk.tb < v.t_eff) continue;
                int drop = wk.tb - v.t_eff;
                for (int dir : {+1, -1}) {
                    if (drop == 0 && dir == -1) continue;
                    LegWitness base = wk;
                    base.tb = v.t_eff;
                    base.rot = wk.rot + dir * drop;
                    base.trace = drop == 0
                                     ? wk.trace
                                     : arena_.add("stabilize",
                                                  "destabilized companion witness to (" +
                                                      std::to_string(base.tb) + "," +
                                                      std::to_string(base.rot) + ")",
                                                  {wk.trace});
                    for (const auto& [tp, rp] : P.leg_pairs) {
                        if (!pattern_pair_parity_ok(P.w, tp, rp)) continue;
                        try {
                            LegWitness sw = satellite_witness({tp, rp}, P.w, base, arena_);
                            store_.add_witness(x, sw);
                        } catch (const RuleError&) {
                            // Output failed the parity audit; pair rejected.
                        }
                    }
                }
            }
        }
    }

    // R10: winding-one pattern with slice closure, placed with r twists,
    // cannot decrease the r-shake genus.
    void rule_shake_monotone(const KnotExpr& x) {
        if (x.kind != KnotExpr::Kind::Sat) return;
        SatView v = decompose_sat(x, reg_);
        if (!v.valid) return;
        PatternDatum Q = twist_pattern(reg_.at(v.name), 0);
        if (Q.w != 1 || !Q.tilde_slice || !*Q.tilde_slice) return;
        int r = v.t_eff;
        Facts& f = store_.facts_for(x);
        Facts& fk = store_.facts_for(v.companion);
        if (!f.gsh.count(r) && !fk.gsh.count(r)) return;
        Interval& ix = store_.gsh_for(x, r);
        Interval& ik = store_.gsh_for(v.companion, r);
        if (is_finite(ix.hi.value)) {
            int t = arena_.add("shake-genus-monotone",
                              "gsh^" + std::to_string(r) + "(companion) <= gsh^" +
                                  std::to_string(r) + "(satellite)",
                              {ix.hi.trace});
            ik.tighten_hi(ix.hi.value, t, ix.hi.caveats);
        }
        if (is_finite(ik.lo.value) && ik.lo.value > 0) {
            int t = arena_.add("shake-genus-monotone",
                              "gsh^" + std::to_string(r) + "(satellite) >= gsh^" +
                                  std::to_string(r) + "(companion)",
                              {ik.lo.trace});
            ix.tighten_lo(ik.lo.value, t, ik.lo.caveats);
        }
    }

    // R11: mirror/reverse transfers and the negation identity
    // gsh^r(K) = gsh^{-r}(-K).
    void rule_symmetry(const KnotExpr& x) {
        if (x.kind != KnotExpr::Kind::Mirror && x.kind != KnotExpr::Kind::Reverse) return;
        const KnotExpr& y = x.args[0];
        Facts& fx = store_.facts_for(x);
        Facts& fy = store_.facts_for(y);

        // g4 and Arf are preserved by both mirror and reverse.
        auto share_g4 = [&](Interval& a, const Interval& b) {
            if (is_finite(b.lo.value) && b.lo.value > 0) {
                int t = arena_.add("symmetry-transfer", "g4 preserved", {b.lo.trace});
                a.tighten_lo(b.lo.value, t, b.lo.caveats);
            }
            if (is_finite(b.hi.value)) {
                int t = arena_.add("symmetry-transfer", "g4 preserved", {b.hi.trace});
                a.tighten_hi(b.hi.value, t, b.hi.caveats);
            }
        };
        share_g4(fx.g4, fy.g4);
        share_g4(fy.g4, fx.g4);
        if (fx.arf.value == ArfVal::V::Unknown && fy.arf.value != ArfVal::V::Unknown)
            store_.set_arf(x, fy.arf.value, fy.arf.trace);
        if (fy.arf.value == ArfVal::V::Unknown && fx.arf.value != ArfVal::V::Unknown)
            store_.set_arf(y, fx.arf.value, fx.arf.trace);

        if (x.kind == KnotExpr::Kind::Reverse) {
            for (const auto& w : fy.witnesses) store_.add_witness(x, reverse_witness(w, arena_));
            for (const auto& w : fx.witnesses) store_.add_witness(y, reverse_witness(w, arena_));
        }

        // The concordance inverse -K = Reverse(Mirror(K)): tau and s negate,
        // gsh^r(x) = gsh^{-r}(K).
        if (x.kind == KnotExpr::Kind::Reverse && y.kind == KnotExpr::Kind::Mirror) {
            const KnotExpr& k = y.args[0];
            Facts& fk = store_.facts_for(k);
            auto negate_link = [&](Interval& a, Interval& b, const char* what) {
                // a = -b.
                if (is_finite(b.hi.value)) {
                    int t = arena_.add("negation-transfer", std::string(what) + " negates",
                                      {b.hi.trace});
                    a.tighten_lo(-b.hi.value, t, b.hi.caveats);
                }
                if (is_finite(b.lo.value)) {
                    int t = arena_.add("negation-transfer", std::string(what) + " negates",
                                      {b.lo.trace});
                    a.tighten_hi(-b.lo.value, t, b.lo.caveats);
                }
            };
            negate_link(fx.tau, fk.tau, "tau");
            negate_link(fk.tau, fx.tau, "tau");
            negate_link(fx.s, fk.s, "s");
            negate_link(fk.s, fx.s, "s");
            std::vector<int> keys;
            for (const auto& [r, iv] : fx.gsh) keys.push_back(r);
            for (const auto& [r, iv] : fk.gsh)
                if (std::find(keys.begin(), keys.end(), -r) == keys.end()) keys.push_back(-r);
            for (int r : keys) {
                Interval& a = store_.gsh_for(x, r);
                Interval& b = store_.gsh_for(k, -r);
                auto link = [&](Interval& dst, const Interval& src) {
                    if (is_finite(src.lo.value) && src.lo.value > 0) {
                        int t = arena_.add("negation-transfer",
                                          "gsh^r(-K) = gsh^{-r}(K)", {src.lo.trace});
                        dst.tighten_lo(src.lo.value, t, src.lo.caveats);
                    }
                    if (is_finite(src.hi.value)) {
                        int t = arena_.add("negation-transfer",
                                          "gsh^r(-K) = gsh^{-r}(K)", {src.hi.trace});
                        dst.tighten_hi(src.hi.value, t, src.hi.caveats);
                    }
                };
                link(a, b);
                link(b, a);
            }
        }
    }

    // R12: TB lower bound from witnesses, and the resulting non-shake-slice
    // range.
    void rule_tb(const KnotExpr& x) {
        Facts& f = store_.facts_for(x);
        for (const auto& w : f.witnesses) {
            if (w.tb > f.tb_lo.value) {
                int t = arena_.add("tb-lower", "TB >= " + std::to_string(w.tb), {w.trace});
                store_.raise_tb_lo(x, w.tb, t, w.caveats);
            }
        }
        if (f.tb_lo.value >= 1) {
            long long b = ceil_div(f.tb_lo.value + 1, 2);
            for (auto& [r, iv] : f.gsh) {
                if (r >= f.tb_lo.value) continue;
                int t = arena_.add("not-r-shake-slice",
                                  "TB >= " + bound_str(f.tb_lo.value) + " forces gsh^" +
                                      std::to_string(r) + " >= " + std::to_string(b),
                                  {f.tb_lo.trace});
                iv.tighten_lo(b, t, f.tb_lo.caveats);
            }
        }
    }

    static std::set<std::string> cav2(const SuitCert& c, const Bound& b) {
        std::set<std::string> s = c.caveats;
        s.insert(b.caveats.begin(), b.caveats.end());
        return s;
    }

    int axiom_trace(const std::string& rule, const std::string& note) {
        auto key = rule + "|" + note;
        auto it = axiom_traces_.find(key);
        if (it != axiom_traces_.end()) return it->second;
        int t = arena_.add(rule, note);
        axiom_traces_[key] = t;
        return t;
    }

    std::vector<TableRow> table_closed_form(const PatternRef& pref, const KnotExpr& base_raw,
                                            int r, int iters) {
        PatternDatum P = resolve_pattern(pref, reg_);
        if (P.w != 1) throw RuleError("family_table: pattern winding number must be 1");
        if (!P.g4_exact()) throw RuleError("family_table: pattern genus not known exactly");
        long long gp = *P.g4_lo;
        if (gp <= 0) throw RuleError("family_table: g4(P) > 0 required");

        KnotExpr base = normalize(base_raw, reg_);
        request_gsh(base, r);
        propagate(base);
        const Facts& fb = store_.facts_for(base);
        if (fb.certs.empty()) throw RuleError("family_table: base has no suitability certificate");
        int cr = fb.certs.front().r;
        bool pair_ok = false;
        for (const auto& [m, rho] : P.leg_pairs)
            if (m >= 0 && cr >= r + m && 2 * gp <= m + rho &&
                pattern_pair_parity_ok(P.w, m, rho))
                pair_ok = true;
        if (!pair_ok)
            throw RuleError("family_table: no pattern pair (m, rho) with base certificate at r+m");
        if (!fb.g4.exact() || !fb.tau.exact() || !fb.s.exact())
            throw RuleError("family_table: base invariants not exact");

        bool pair_gsh = P.leg_pairs.count({1, static_cast<int>(2 * gp - 1)}) > 0;
        bool gsh_col = pair_gsh && cr >= r + 1;
        const Interval* gb = nullptr;
        if (gsh_col) {
            gb = &store_.gsh_for(base, r);
            if (!gb->exact()) gsh_col = false;
        }
        // Even when the base's own r-shake genus is not pinned, the satellite
        // iterates i >= 1 carry a transported witness with tb >= r + 1, which
        // pins gsh^r to the slice genus for those rows.
        bool later_rows = pair_gsh && cr >= r && r <= 2 * fb.g4.lo.value - 1;

        std::vector<TableRow> rows;
        for (int i = 0; i <= iters; ++i) {
            TableRow row;
            row.i = i;
            auto shift = [&](const Interval& src, long long d) {
                Interval iv = src;
                iv.lo.value += d;
                iv.hi.value += d;
                return iv;
            };
            row.g4 = shift(fb.g4, static_cast<long long>(i) * gp);
            row.tau = shift(fb.tau, static_cast<long long>(i) * gp);
            row.s = shift(fb.s, 2LL * i * gp);
            row.caveats = row.g4.caveats();
            if (gsh_col) {
                row.gsh = shift(*gb, static_cast<long long>(i) * gp);
                auto c = row.gsh->caveats();
                row.caveats.insert(c.begin(), c.end());
            } else if (later_rows && i >= 1) {
                row.gsh = shift(fb.g4, static_cast<long long>(i) * gp);
                auto c = row.gsh->caveats();
                row.caveats.insert(c.begin(), c.end());
            }
            rows.push_back(std::move(row));
        }
        return rows;
    }

    std::vector<TableRow> table_per_term(const PatternRef& pref, const KnotExpr& base_raw, int r,
                                         int iters) {
        std::vector<TableRow> rows;
        KnotExpr cur = normalize(base_raw, reg_);
        for (int i = 0; i <= iters; ++i) {
            request_gsh(cur, r);
            propagate(cur);
            const Facts& f = store_.facts_for(cur);
            TableRow row;
            row.i = i;
            row.g4 = f.g4;
            row.tau = f.tau;
            row.s = f.s;
            auto it = f.gsh.find(r);
            if (it != f.gsh.end() && it->second.exact()) row.gsh = it->second;
            row.caveats = row.g4.caveats();
            rows.push_back(std::move(row));
            cur = normalize(KnotExpr::sat(pref, r, cur), reg_);
        }
        return rows;
    }

    const Registry& reg_;
    TraceArena arena_;
    FactStore store_;
    std::map<std::string, std::optional<LaurentPoly>> alex_memo_;
    std::map<std::string, int> axiom_traces_;
};

} // namespace knotcert
