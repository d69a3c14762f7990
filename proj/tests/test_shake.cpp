#include <doctest.h>

#include <random>

#include "knotcert/shake.hpp"

using namespace knotcert;

TEST_SUITE("shake") {

TEST_CASE("certificate construction enforces odd component counts") {
    Registry reg = builtin_registry();
    KnotExpr a = parse_expr("(torus 2 3)", reg);
    KnotExpr b = parse_expr("(torus 2 5)", reg);
    ShakeCert c = make_shake_cert(1, a, b, 3, 5, {}, -1);
    CHECK(c.p == 3);
    CHECK(c.q == 5);
    CHECK_THROWS_AS(make_shake_cert(1, a, b, 2, 5, {}, -1), RuleError);
    CHECK_THROWS_AS(make_shake_cert(1, a, b, 3, 0, {}, -1), RuleError);
    CHECK_THROWS_AS(make_shake_cert(1, a, b, -1, 3, {}, -1), RuleError);

    auto j = c.to_json();
    CHECK(j["r"] == 1);
    CHECK(j["p"] == 3);
    CHECK(j["left"] == "(torus 2 3)");
}

TEST_CASE("symmetry swaps sides and counts") {
    Registry reg = builtin_registry();
    TraceArena arena;
    ShakeCert c = make_shake_cert(0, parse_expr("(torus 2 3)", reg),
                                  parse_expr("unknot", reg), 3, 1, {}, -1);
    ShakeCert s = symmetry(c, arena);
    CHECK(s.left == c.right);
    CHECK(s.right == c.left);
    CHECK(s.p == 1);
    CHECK(s.q == 3);
    ShakeCert ss = symmetry(s, arena);
    CHECK(ss.p == c.p);
    CHECK(ss.left == c.left);
}

TEST_CASE("composition of one-sided certificates multiplies the counts") {
    Registry reg = builtin_registry();
    TraceArena arena;
    KnotExpr a = parse_expr("(torus 2 3)", reg);
    KnotExpr b = parse_expr("(torus 2 5)", reg);
    KnotExpr c = parse_expr("(torus 3 4)", reg);
    ShakeCert ab = make_shake_cert(2, a, b, 3, 1, {}, -1);
    ShakeCert bc = make_shake_cert(2, b, c, 5, 1, {}, -1);
    ShakeCert ac = compose_11(ab, bc, arena);
    CHECK(ac.p == 15);
    CHECK(ac.q == 1);
    CHECK(ac.left == a);
    CHECK(ac.right == c);

    CHECK_THROWS_AS(compose_11(ab, make_shake_cert(3, b, c, 5, 1, {}, -1), arena),
                    RuleError);  // twist mismatch
    CHECK_THROWS_AS(compose_11(ab, make_shake_cert(2, a, c, 5, 1, {}, -1), arena),
                    RuleError);  // endpoint mismatch
    CHECK_THROWS_AS(compose_11(make_shake_cert(2, a, b, 3, 3, {}, -1), bc, arena),
                    RuleError);  // q != 1

    // Random odd products stay odd and multiply.
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
        long long p1 = 2 * static_cast<long long>(rng() % 50) + 1;
        long long p2 = 2 * static_cast<long long>(rng() % 50) + 1;
        ShakeCert x = make_shake_cert(0, a, b, p1, 1, {}, -1);
        ShakeCert y = make_shake_cert(0, b, c, p2, 1, {}, -1);
        ShakeCert z = compose_11(x, y, arena);
        CHECK(z.p == p1 * p2);
        CHECK(z.p % 2 == 1);
    }
}

TEST_CASE("slice-pattern satellites give (1, n_geom) certificates") {
    Registry reg = builtin_registry();
    TraceArena arena;
    KnotExpr k = parse_expr("(torus 2 5)", reg);
    ShakeCert c = satellite_shake(PatternRef::named("mazur"), k, 2, reg, arena);
    CHECK(c.p == 1);
    CHECK(c.q == 3);
    CHECK(c.r == 2);
    CHECK(to_string(c.left) == "(sat mazur :r 2 (torus 2 5))");
    CHECK(c.right == k);

    ShakeCert cc = satellite_shake(PatternRef::named("core"), k, 0, reg, arena);
    CHECK(cc.q == 1);

    CHECK_THROWS_AS(satellite_shake(PatternRef::named("r1"), k, 0, reg, arena),
                    RuleError);  // n_geom unknown
    Registry reg2 = reg;
    PatternDatum noslice;
    noslice.name = "noslice";
    noslice.w = 1;
    noslice.n_geom = 3;
    noslice.tilde_slice = false;
    reg2.add(noslice);
    CHECK_THROWS_AS(satellite_shake(PatternRef::named("noslice"), k, 0, reg2, arena),
                    RuleError);
}

TEST_CASE("gluing two satellite certificates through a shake concordance") {
    Registry reg = builtin_registry();
    TraceArena arena;
    KnotExpr k = parse_expr("(torus 2 3)", reg);
    KnotExpr j = parse_expr("(torus 2 5)", reg);
    for (long long kk : {0, 1, 2}) {
        for (long long ll : {0, 1, 2}) {
            for (const char* pa : {"core", "mazur"}) {
                for (const char* pb : {"core", "mazur"}) {
                    ShakeCert a = satellite_shake(PatternRef::named(pa), k, 1, reg, arena);
                    ShakeCert b = satellite_shake(PatternRef::named(pb), j, 1, reg, arena);
                    ShakeCert s = make_shake_cert(1, a.left, b.left, 2 * kk + 1, 2 * ll + 1,
                                                  {}, -1);
                    ShakeCert g = glue_general(s, a, b, arena);
                    CHECK(g.left == k);
                    CHECK(g.right == j);
                    CHECK(g.p == a.q * (2 * kk + 1));
                    CHECK(g.q == b.q * (2 * ll + 1));
                    CHECK(g.p % 2 == 1);
                    CHECK(g.q % 2 == 1);
                }
            }
        }
    }
    ShakeCert a = satellite_shake(PatternRef::named("mazur"), k, 1, reg, arena);
    ShakeCert b = satellite_shake(PatternRef::named("mazur"), j, 1, reg, arena);
    ShakeCert bad = make_shake_cert(1, a.left, k, 1, 1, {}, -1);
    CHECK_THROWS_AS(glue_general(bad, a, b, arena), RuleError);  // right side mismatch
    ShakeCert wrong_r = make_shake_cert(2, a.left, b.left, 1, 1, {}, -1);
    CHECK_THROWS_AS(glue_general(wrong_r, a, b, arena), RuleError);
}

TEST_CASE("one-sided certificates to the unknot pin the shake genus") {
    Registry reg = builtin_registry();
    Engine en(reg);
    ShakeCert c = satellite_shake(PatternRef::named("core"), parse_expr("unknot", reg), 0,
                                  reg, en.arena());
    shake_slice_cert(c, en);
    const Interval& g = en.store().gsh_for(c.left, 0);
    CHECK(g.hi.value == 0);

    ShakeCert not_unknot = satellite_shake(PatternRef::named("core"),
                                           parse_expr("(torus 2 3)", reg), 0, reg, en.arena());
    CHECK_THROWS_AS(shake_slice_cert(not_unknot, en), RuleError);
}

TEST_CASE("sliceness of a ribbon-pattern satellite makes the companion shake slice") {
    Registry reg = builtin_registry();
    {
        Engine en(reg);
        KnotExpr k = parse_expr("(wh unknot)", reg);
        en.inject_slice_cert(KnotExpr::sat(PatternRef::named("r1"), 2, k));
        auto cert = from_slice(PatternRef::named("r1"), k, 2, en);
        CHECK(!cert.has_value());  // r1's geometric winding is unknown
        CHECK(en.store().gsh_for(k, 2).hi.value == 0);
    }
    {
        Engine en(reg);
        KnotExpr k = parse_expr("(wh unknot)", reg);
        en.inject_slice_cert(KnotExpr::sat(PatternRef::named("mazur"), 1, k));
        auto cert = from_slice(PatternRef::named("mazur"), k, 1, en);
        REQUIRE(cert.has_value());
        CHECK(cert->p == 3);
        CHECK(cert->q == 1);
        CHECK(cert->right == KnotExpr::unknot());
        CHECK(en.store().gsh_for(k, 1).hi.value == 0);
    }
    {
        // Without the sliceness certificate the rule refuses.
        Engine en(reg);
        KnotExpr k = parse_expr("(wh unknot)", reg);
        CHECK_THROWS_AS(from_slice(PatternRef::named("r1"), k, 2, en), RuleError);
    }
    {
        // Non-ribbon patterns refuse.
        Registry reg2 = reg;
        PatternDatum norib;
        norib.name = "norib";
        norib.w = 1;
        norib.tilde_ribbon = false;
        reg2.add(norib);
        Engine en(reg2);
        KnotExpr k = parse_expr("(wh unknot)", reg2);
        CHECK_THROWS_AS(from_slice(PatternRef::named("norib"), k, 0, en), RuleError);
    }
    {
        // Caveats on the sliceness certificate flow into the shake bound.
        Engine en(reg);
        KnotExpr k = parse_expr("(wh unknot)", reg);
        KnotExpr satk = normalize(KnotExpr::sat(PatternRef::named("mazur"), 0, k), reg);
        int t = en.arena().add("external", "conditionally slice");
        en.store().facts_for(satk).g4.tighten_hi(0, t, {CAVEAT_SPC4});
        auto cert = from_slice(PatternRef::named("mazur"), k, 0, en);
        REQUIRE(cert.has_value());
        CHECK(cert->caveats.count(CAVEAT_SPC4) == 1);
        CHECK(en.store().gsh_for(k, 0).hi.caveats.count(CAVEAT_SPC4) == 1);
    }
}

TEST_CASE("extending a certificate chain by a satellite pattern") {
    Registry reg = builtin_registry();
    TraceArena arena;
    KnotExpr k = parse_expr("(torus 2 3)", reg);
    ShakeCert c1 = satellite_shake(PatternRef::named("core"), k, 0, reg, arena);
    auto chain = extend_chain_by_satellite(PatternRef::named("mazur"), {c1}, reg, arena);
    REQUIRE(chain.size() == 3);
    for (size_t i = 0; i + 1 < chain.size(); ++i) {
        CHECK(chain[i].right == chain[i + 1].left);
        CHECK(chain[i].r == chain[i + 1].r);
    }
    for (const auto& c : chain) {
        CHECK(c.p % 2 == 1);
        CHECK(c.q % 2 == 1);
    }
    CHECK(chain.front().left ==
          normalize(KnotExpr::sat(PatternRef::named("mazur"), 0, c1.left), reg));
    CHECK(chain.back().right ==
          normalize(KnotExpr::sat(PatternRef::named("mazur"), 0, k), reg));

    CHECK_THROWS_AS(extend_chain_by_satellite(PatternRef::named("mazur"), {}, reg, arena),
                    RuleError);
}

TEST_CASE("curve class arithmetic") {
    CurveClass a = curve("m_i(Q)", 2) + curve("l_i(Q)");
    CurveClass b = curve("m_i(Q)", 2);
    CHECK(to_string(a - b) == "l_i(Q)");
    CHECK(is_zero(a - a));
    CHECK(to_string(3 * b) == "6*m_i(Q)");
    CHECK(to_string(curve("x") - curve("y", 2)) == "x - 2*y");
    CHECK(to_string(CurveClass{}) == "0");
    CHECK(is_zero(0 * a));
}

TEST_CASE("iterated and composed gluings agree exactly in the unit-winding or zero-twist cases") {
    for (int wp = -3; wp <= 3; ++wp) {
        if (wp == 0) continue;
        for (int wq = -3; wq <= 3; ++wq) {
            if (wq == 0) continue;
            for (int r = -3; r <= 3; ++r) {
                for (int s = -3; s <= 3; ++s) {
                    GluingComparison c = compare_gluings(wp, wq, r, s);
                    bool expect_equal = (wq == 1 || wq == -1 || r == 0);
                    CHECK(c.equal == expect_equal);
                    if (!c.equal) {
                        // The discrepancy is concentrated on the inner meridian
                        // with coefficient r*(wq^2 - 1).
                        CurveClass want =
                            curve("m_i(Q)", static_cast<long long>(r) * (wq * wq - 1));
                        CHECK(is_zero(c.mismatch - want));
                    }
                }
            }
        }
    }
    CHECK(compare_gluings(1, 7, 7, 7).equal == false);
    CHECK(compare_gluings(7, 1, 7, 7).equal == true);
    GluingComparison m = compare_gluings(1, 2, 1, 1);
    CHECK(to_string(m.mismatch) == "3*m_i(Q)");
}

TEST_CASE("gluing data exposes the expected interface identifications") {
    auto [it, co] = build_gluings(1, 1, 3, 5);
    REQUIRE(it.identifications.size() == 4);
    REQUIRE(co.identifications.size() == 4);
    // K-meridian identification is shared verbatim.
    CHECK(is_zero(it.identifications[0].first - co.identifications[0].first));
    CHECK(is_zero(it.identifications[0].second - co.identifications[0].second));
    // For unit windings the outer longitudes agree.
    CHECK(is_zero(it.outer_longitude - co.outer_longitude));

    auto [it2, co2] = build_gluings(2, 3, 1, 1);
    CHECK(!is_zero(it2.outer_longitude - co2.outer_longitude));
}

} // TEST_SUITE
