#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "lipext/constants.hpp"
#include "lipext/errors.hpp"
#include "lipext/onto_extension.hpp"
#include "lipext/symbolic.hpp"

using namespace lipext;

TEST_SUITE("onto_extension") {

TEST_CASE("cover of a level") {
    auto F = fixtures::cantor();
    auto k = estimate_constants(F, 6);
    std::vector<Point> pts;
    for (const auto& w : words_of_length(2, 4)) pts.push_back(F.point(w));
    auto rep = cover_image(F, pts, 0.05, 1.0, k);
    CHECK(rep.m == 8);
    CHECK(rep.words == words_of_length(2, 3));
    CHECK(rep.d_i == doctest::Approx(0.05 / k.c));
    CHECK(rep.violations.empty());
    CHECK(rep.lower_margin > 0.0);
    CHECK(rep.upper_margin > 0.0);
    // Neighbouring level-3 cylinders are 1/27 apart.
    CHECK(rep.M2 * rep.d_i == doctest::Approx(1.0 / 27));
    CHECK(format_cover(rep).find("m = 8") != std::string::npos);
}

TEST_CASE("a cover that breaks the sandwich is reported") {
    auto F = fixtures::cantor();
    auto k = estimate_constants(F, 6);
    // With L tiny, d_i = threshold L / c is smaller than the cylinders found.
    auto rep = cover_image(F, {{0.0}}, 0.05, 0.01, k);
    CHECK_FALSE(rep.violations.empty());
    CHECK(rep.upper_margin < 0.0);
}

TEST_CASE("identity onto the Cantor set") {
    auto E = fixtures::cantor();
    auto id = AddressTransducer::parse(fixtures::kIdentity2, 2, 2);
    ExtensionConfig cfg;
    cfg.schedule = {2, 3, 4};
    cfg.delta = 1e-3;
    cfg.extra_steps = 2;
    auto r = thm2_construct(E, E, id, cfg);
    CHECK(r.L == 1.0);
    CHECK(r.covers.size() == 5);
    CHECK(r.tables.size() == 3);
    CHECK(r.m == r.m_extended);
    for (const auto& c : r.covers) {
        CHECK(c.violations.empty());
        CHECK(c.partition.cut.size() == c.m);
        CHECK(c.m == r.m);
    }
    for (double L : r.table_L_high) CHECK(L == doctest::Approx(1.0));
    auto lim = extract_limit(r.tables, 0.01);
    REQUIRE(lim.converged);
    auto v = verify_map_table(lim.table, &r.target_net, 2.0 * r.target_mesh, VerifyMode::Onto);
    CHECK(v.passed);
}

TEST_CASE("grouping inverse from a cylinder") {
    auto E = fixtures::ninth4(), F = fixtures::cantor();
    auto gi = AddressTransducer::parse(fixtures::kGroupingInverse, 4, 2);
    gi.restrict_to(SymbolicSubset({Word{1}}, 4));
    ExtensionConfig cfg;
    cfg.schedule = {2, 3, 4};
    cfg.delta = 1e-3;
    auto r = thm2_construct(E, F, gi, cfg);
    REQUIRE(r.into_stage.has_value());
    REQUIRE(r.into_k.has_value());
    CHECK(r.m == r.m_extended);
    for (const auto& c : r.covers) {
        CHECK(c.violations.empty());
        CHECK(c.lower_margin > 0.0);
        CHECK(c.partition.cut.size() == c.m);
    }
    auto lim = extract_limit(r.tables, 0.01);
    REQUIRE(lim.converged);
    CHECK(verify_map_table(lim.table, &r.target_net, 2.0 * r.target_mesh, VerifyMode::Onto).passed);
}

TEST_CASE("unsupported targets") {
    auto T = fixtures::fifth3();
    auto id3 = AddressTransducer::parse("s, 1 -> s, 1\ns, 2 -> s, 2\ns, 3 -> s, 3\n", 3, 3);
    ExtensionConfig cfg;
    cfg.schedule = {2, 3};
    CHECK_THROWS_AS(thm2_construct(T, T, id3, cfg), UnsupportedError);
    auto D = fixtures::dyadic();
    auto id = AddressTransducer::parse(fixtures::kIdentity2, 2, 2);
    try {
        thm2_construct(D, D, id, cfg);
        FAIL("expected a construction error");
    } catch (const ConstructionError& e) {
        CHECK(e.stage() == "separation");
    }
}

}
