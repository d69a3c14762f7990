#include <doctest.h>

#include <string>
#include <vector>

#include "knotcert/engine.hpp"

using namespace knotcert;

namespace {

const std::vector<std::string>& corpus() {
    static const std::vector<std::string> exprs = {
        "unknot",
        "(torus 2 3)",
        "(torus 2 5)",
        "(torus 2 7)",
        "(torus 3 4)",
        "(torus 3 5)",
        "(sum (torus 2 3) (torus 2 5))",
        "(sum (torus 2 3) (torus 2 3) (torus 2 3))",
        "(wh (torus 2 3))",
        "(wh (torus 2 5))",
        "(sum (wh (torus 2 3)) (wh (torus 2 3)))",
        "(sat mazur :r 0 (wh (torus 2 3)))",
        "(sat mazur :r 0 (sat mazur :r 0 (wh (torus 2 3))))",
        "(sat mazur :r 1 (torus 2 5))",
        "(sat mazur :r -2 (torus 2 5))",
        "(sat core :r 0 unknot)",
        "(sat r1 :r 2 unknot)",
        "(mirror (torus 2 3))",
        "(rev (torus 2 5))",
        "(rev (mirror (torus 2 3)))",
        "(rev (mirror (sum (torus 2 3) (torus 2 5))))",
        "(mirror (wh (torus 2 3)))",
        "(sum (torus 2 5) (rev (mirror (torus 2 5))))",
        "(wh (sum (torus 2 3) (torus 3 4)))",
        "(sat mazur :r 0 (torus 3 4))",
        "(sat mazur :r 3 (torus 3 4))",
        "(sum (sat mazur :r 0 (wh (torus 2 3))) (torus 2 3))",
        "(wh unknot)",
        "(torus 5 7)",
        "(sum (torus 2 7) (torus 3 5))",
    };
    return exprs;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("fixture invariants for torus knots") {
    Registry reg = builtin_registry();
    Engine en(reg);
    KnotExpr t25 = parse_expr("(torus 2 5)", reg);
    en.request_gsh(t25, 0);
    en.propagate(t25);
    const Facts& f = en.store().facts_for(t25);
    CHECK(f.g4.exact());
    CHECK(f.g4.lo.value == 2);
    CHECK(f.tau.exact());
    CHECK(f.tau.lo.value == 2);
    CHECK(f.s.exact());
    CHECK(f.s.lo.value == 4);
    CHECK(f.gsh.at(0).exact());
    CHECK(f.gsh.at(0).lo.value == 2);
    CHECK(f.tb_lo.value == 3);
    CHECK(f.arf.value == ArfVal::V::One);
    REQUIRE(f.witnesses.size() == 1);
    CHECK(f.witnesses[0].tb == 3);
    CHECK(f.witnesses[0].rot == 0);
    REQUIRE(f.certs.size() == 1);
    CHECK(f.certs[0].r == 3);

    KnotExpr t34 = parse_expr("(torus 3 4)", reg);
    en.request_gsh(t34, 3);
    en.propagate(t34);
    const Facts& g = en.store().facts_for(t34);
    CHECK(g.g4.lo.value == 3);
    CHECK(g.gsh.at(3).exact());
    CHECK(g.gsh.at(3).lo.value == 3);
}

TEST_CASE("whitehead doubles of positive torus knots") {
    Registry reg = builtin_registry();
    Engine en(reg);
    KnotExpr w = parse_expr("(wh (torus 2 3))", reg);
    en.request_gsh(w, 0);
    en.propagate(w);
    const Facts& f = en.store().facts_for(w);
    CHECK(f.g4.exact());
    CHECK(f.g4.lo.value == 1);
    CHECK(f.tau.lo.value == 1);
    CHECK(f.s.exact());
    CHECK(f.s.lo.value == 2);
    CHECK(f.gsh.at(0).exact());
    CHECK(f.gsh.at(0).lo.value == 1);
    CHECK(f.arf.value == ArfVal::V::Zero);
    REQUIRE(f.certs.size() == 1);
    CHECK(f.certs[0].r == 1);
}

TEST_CASE("connected sums combine certificates, witnesses and arf") {
    Registry reg = builtin_registry();
    Engine en(reg);
    KnotExpr s = normalize(parse_expr("(sum (torus 2 3) (torus 2 5))", reg), reg);
    en.propagate(s);
    const Facts& f = en.store().facts_for(s);
    CHECK(f.g4.exact());
    CHECK(f.g4.lo.value == 3);
    CHECK(f.tau.exact());
    CHECK(f.tau.lo.value == 3);
    CHECK(f.tb_lo.value == 5);  // 1 + 3 + 1
    CHECK(f.arf.value == ArfVal::V::Zero);  // 1 + 1 mod 2
    REQUIRE(f.certs.size() == 1);
    CHECK(f.certs[0].r == 5);
}

TEST_CASE("satellite iterates gain one genus per mazur layer") {
    Registry reg = builtin_registry();
    Engine en(reg);
    KnotExpr e = normalize(
        parse_expr("(sat mazur :r 0 (sat mazur :r 0 (wh (torus 2 3))))", reg), reg);
    en.request_gsh(e, 0);
    en.propagate(e);
    const Facts& f = en.store().facts_for(e);
    CHECK(f.g4.exact());
    CHECK(f.g4.lo.value == 3);
    CHECK(f.tau.lo.value == 3);
    CHECK(f.gsh.at(0).exact());
    CHECK(f.gsh.at(0).lo.value == 3);
}

TEST_CASE("mirror and negation transfers") {
    Registry reg = builtin_registry();
    Engine en(reg);
    KnotExpr t = parse_expr("(torus 2 3)", reg);
    KnotExpr neg = normalize(KnotExpr::negate(t), reg);
    en.request_gsh(t, 0);
    en.request_gsh(neg, 0);
    en.propagate(t);
    en.propagate(neg);
    const Facts& fn = en.store().facts_for(neg);
    CHECK(fn.g4.exact());
    CHECK(fn.g4.lo.value == 1);              // genus preserved
    CHECK(fn.tau.exact());
    CHECK(fn.tau.lo.value == -1);            // tau negates
    CHECK(fn.s.exact());
    CHECK(fn.s.lo.value == -2);              // s negates
    CHECK(fn.arf.value == ArfVal::V::One);   // arf preserved
    CHECK(fn.gsh.at(0).exact());
    CHECK(fn.gsh.at(0).lo.value == 1);       // gsh^0(-K) = gsh^0(K)

    KnotExpr m = normalize(parse_expr("(mirror (torus 2 3))", reg), reg);
    en.propagate(m);
    const Facts& fm = en.store().facts_for(m);
    CHECK(fm.g4.exact());
    CHECK(fm.g4.lo.value == 1);
}

TEST_CASE("negation swaps the shake parameter sign") {
    Registry reg = builtin_registry();
    Engine en(reg);
    KnotExpr t = parse_expr("(torus 2 5)", reg);
    KnotExpr neg = normalize(KnotExpr::negate(t), reg);
    en.request_gsh(neg, -2);
    en.request_gsh(t, 2);
    en.propagate(neg);
    en.propagate(t);
    // gsh^{-2}(-K) = gsh^{2}(K), and T(2,5) is 3-suitable so gsh^2 = g4 = 2.
    const Facts& fn = en.store().facts_for(neg);
    CHECK(fn.gsh.at(-2).exact());
    CHECK(fn.gsh.at(-2).lo.value == 2);
}

TEST_CASE("verdicts") {
    Registry reg = builtin_registry();

    {
        Engine en(reg);
        Verdict v = en.shake_slice_verdict(parse_expr("unknot", reg), 4);
        CHECK(v.kind == Verdict::Kind::Certified);
    }
    for (int r = -5; r <= 5; ++r) {
        Engine en(reg);
        Verdict v = en.shake_slice_verdict(parse_expr("(torus 2 3)", reg), r);
        CHECK(v.kind == Verdict::Kind::No);
        CHECK(v.reason.find("arf") != std::string::npos);
    }
    {
        // Arf vanishes for T(2,7); the twist-parameter obstructions take over.
        Engine en(reg);
        Verdict v = en.shake_slice_verdict(parse_expr("(torus 2 7)", reg), 0);
        CHECK(v.kind == Verdict::Kind::No);
    }
    {
        Engine en(reg);
        Verdict v = en.shake_slice_verdict(parse_expr("(sat r1 :r 3 unknot)", reg), 3);
        CHECK(v.kind == Verdict::Kind::CertifiedModuloSPC4);
        CHECK(v.caveats.count(CAVEAT_SPC4) == 1);
        // The certified bound carries the caveat in the store too.
        KnotExpr e = normalize(parse_expr("(sat r1 :r 3 unknot)", reg), reg);
        const Interval& g = en.store().gsh_for(e, 3);
        CHECK(g.hi.value == 0);
        CHECK(g.hi.caveats.count(CAVEAT_SPC4) == 1);
    }
    {
        // Slice-pattern satellite of a knot with arf = 1: obstructed through
        // the companion even though the satellite's own tau may be silent.
        Engine en(reg);
        Verdict v = en.shake_slice_verdict(parse_expr("(sat r1 :r 0 (torus 2 5))", reg), 0);
        CHECK(v.kind == Verdict::Kind::No);
        bool mentions = v.reason.find("arf") != std::string::npos ||
                        v.reason.find("tau") != std::string::npos;
        CHECK(mentions);
    }
    {
        // No rule applies: an honest Unknown.
        Engine en(reg);
        Verdict v = en.shake_slice_verdict(parse_expr("(wh unknot)", reg), 0);
        CHECK(v.kind == Verdict::Kind::Unknown);
    }
    {
        // Characterization witness path: a ribbon pattern whose satellite is
        // certified slice upgrades Unknown to Certified.
        Engine en(reg);
        KnotExpr k = parse_expr("(wh unknot)", reg);
        KnotExpr satk = normalize(KnotExpr::sat(PatternRef::named("r1"), 0, k), reg);
        en.inject_slice_cert(satk);
        en.propagate(satk);
        Verdict v = en.shake_slice_verdict(k, 0, CharWitness{"r1"});
        CHECK(v.kind == Verdict::Kind::Certified);
    }
    {
        // The same witness without the sliceness certificate stays Unknown.
        Engine en(reg);
        Verdict v = en.shake_slice_verdict(parse_expr("(wh unknot)", reg), 0,
                                           CharWitness{"r1"});
        CHECK(v.kind == Verdict::Kind::Unknown);
        CHECK(v.reason.find("witness invalid") != std::string::npos);
    }
}

TEST_CASE("family tables: closed form and per-term derivations agree") {
    Registry reg = builtin_registry();
    KnotExpr base = parse_expr("(wh (torus 2 3))", reg);
    for (int r = -3; r <= 1; ++r) {
        Engine ec(reg), ep(reg);
        auto closed = ec.family_table(PatternRef::named("mazur"), base, r, 4,
                                      Engine::TablePath::ClosedForm);
        auto per = ep.family_table(PatternRef::named("mazur"), base, r, 4,
                                   Engine::TablePath::PerTerm);
        REQUIRE(closed.size() == 5);
        REQUIRE(per.size() == 5);
        for (size_t i = 0; i < closed.size(); ++i) {
            CHECK(closed[i].g4.lo.value == per[i].g4.lo.value);
            CHECK(closed[i].g4.hi.value == per[i].g4.hi.value);
            CHECK(closed[i].tau.lo.value == per[i].tau.lo.value);
            CHECK(closed[i].s.lo.value == per[i].s.lo.value);
            CHECK(closed[i].gsh.has_value() == per[i].gsh.has_value());
            if (closed[i].gsh) {
                CHECK(closed[i].gsh->lo.value == per[i].gsh->lo.value);
                CHECK(closed[i].gsh->hi.value == per[i].gsh->hi.value);
            }
            // The expected closed form: everything shifts by the pattern genus.
            long long k = static_cast<long long>(i);
            CHECK(closed[i].g4.lo.value == 1 + k);
            CHECK(closed[i].tau.lo.value == 1 + k);
            CHECK(closed[i].s.lo.value == 2 + 2 * k);
            if (r <= 0) {
                REQUIRE(closed[i].gsh.has_value());
                CHECK(closed[i].gsh->lo.value == 1 + k);
            }
        }
    }
}

TEST_CASE("family tables fall back to per-term when the closed form does not apply") {
    Registry reg = builtin_registry();
    Engine en(reg);
    // Wh(unknot) has no suitability certificate, so the closed form refuses.
    KnotExpr base = parse_expr("(wh unknot)", reg);
    CHECK_THROWS_AS(en.family_table(PatternRef::named("mazur"), base, 0, 2,
                                    Engine::TablePath::ClosedForm),
                    RuleError);
    Engine en2(reg);
    auto rows = en2.family_table(PatternRef::named("mazur"), base, 0, 2,
                                 Engine::TablePath::Auto);
    CHECK(rows.size() == 3);
}

TEST_CASE("propagation is confluent under randomized rule application order") {
    Registry reg = builtin_registry();
    std::string canonical;
    {
        Engine en(reg);
        for (const auto& s : corpus()) {
            KnotExpr e = normalize(parse_expr(s, reg), reg);
            en.request_gsh(e, 0);
            en.propagate(e);
        }
        canonical = en.store().signature();
    }
    for (unsigned seed = 1; seed <= 20; ++seed) {
        Engine en(reg);
        for (const auto& s : corpus()) {
            KnotExpr e = normalize(parse_expr(s, reg), reg);
            en.request_gsh(e, 0);
            en.propagate(e, seed);
        }
        CHECK(en.store().signature() == canonical);
    }
}

TEST_CASE("fixpoint reached within the iteration bound, with consistent intervals") {
    Registry reg = builtin_registry();
    Engine en(reg);
    for (const auto& s : corpus()) {
        KnotExpr e = normalize(parse_expr(s, reg), reg);
        en.request_gsh(e, 0);
        en.request_gsh(e, 2);
        en.propagate(e);  // throws if the bound is exceeded
    }
    for (const auto& [key, f] : en.store().all()) {
        CHECK(f.g4.lo.value <= f.g4.hi.value);
        CHECK(f.tau.lo.value <= f.tau.hi.value);
        CHECK(f.s.lo.value <= f.s.hi.value);
        CHECK(f.g4.lo.value >= 0);
        for (const auto& [r, iv] : f.gsh) {
            CHECK(iv.lo.value <= iv.hi.value);
            CHECK(iv.lo.value >= 0);
        }
        for (const auto& w : f.witnesses) CHECK(w.parity_ok());
    }
}

TEST_CASE("external injections are audited") {
    Registry reg = builtin_registry();
    {
        Engine en(reg);
        en.inject_suit_cert(parse_expr("unknot", reg), 1);
        try {
            en.propagate(parse_expr("unknot", reg));
            FAIL("expected a contradiction");
        } catch (const ContradictionError& e) {
            CHECK(en.arena().at(e.lo_trace()).rule == "suitable-range-bound");
        }
    }
    {
        Engine en(reg);
        CHECK_THROWS_AS(en.inject_witness(parse_expr("(torus 2 3)", reg), 2, 2), RuleError);
        // A consistent external witness sharpens the facts.
        en.inject_witness(parse_expr("(torus 2 3)", reg), 1, 0);
        en.propagate(parse_expr("(torus 2 3)", reg));
        CHECK(en.store().facts_for(parse_expr("(torus 2 3)", reg)).tb_lo.value == 1);
    }
    {
        // An external witness exceeding the genus bound contradicts.
        Engine en(reg);
        en.inject_witness(parse_expr("(torus 2 3)", reg), 5, 0);
        CHECK_THROWS_AS(en.propagate(parse_expr("(torus 2 3)", reg)), ContradictionError);
    }
}

TEST_CASE("json report shape") {
    Registry reg = builtin_registry();
    Engine en(reg);
    auto j = en.report(parse_expr("(torus 2 5)", reg), {0});
    CHECK(j["expr"] == "(torus 2 5)");
    CHECK(j["g4"]["lo"] == 2);
    CHECK(j["g4"]["hi"] == 2);
    CHECK(j["gsh"]["0"]["lo"] == 2);
    CHECK(j["arf"] == "1");
    CHECK(j["tb_lo"] == 3);
    CHECK(j["witnesses"].size() == 1);
    CHECK(j["suitability"][0]["r"] == 3);
}

TEST_CASE("satellite decomposition peels composed chains") {
    Registry reg = builtin_registry();
    KnotExpr once = normalize(parse_expr("(sat mazur :r 2 (torus 2 5))", reg), reg);
    KnotExpr twice = normalize(KnotExpr::sat(PatternRef::named("mazur"), 2, once), reg);
    SatView v = decompose_sat(twice, reg);
    REQUIRE(v.valid);
    CHECK(v.name == "mazur");
    CHECK(v.t_eff == 2);
    CHECK(v.companion == once);

    SatView w = decompose_sat(once, reg);
    REQUIRE(w.valid);
    CHECK(w.companion == parse_expr("(torus 2 5)", reg));
    CHECK(!decompose_sat(parse_expr("(torus 2 5)", reg), reg).valid);
}

} // TEST_SUITE
