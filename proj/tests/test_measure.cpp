#include <chrono>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "lipext/measure.hpp"

using namespace lipext;

TEST_SUITE("measure") {

TEST_CASE("similarity dimensions") {
    CHECK(std::abs(moran_dimension(fixtures::cantor()).s - std::log(2.0) / std::log(3.0)) < 1e-12);
    CHECK(std::abs(moran_dimension(fixtures::ninth4()).s - std::log(4.0) / std::log(9.0)) < 1e-12);
    CHECK(std::abs(moran_dimension(fixtures::dyadic()).s - 1.0) < 1e-12);
    // (1/2)^s + (1/4)^s = 1 gives 2^-s = (sqrt 5 - 1) / 2.
    double golden = std::log((1.0 + std::sqrt(5.0)) / 2.0) / std::log(2.0);
    CHECK(std::abs(moran_dimension(fixtures::half_quarter()).s - golden) < 1e-12);
    // Three maps of ratio 1/5.
    CHECK(std::abs(moran_dimension(fixtures::planar3()).s - std::log(3.0) / std::log(5.0)) < 1e-12);
}

TEST_CASE("Moebius dimension brackets agree across depths") {
    auto E = fixtures::moebius_pair();
    auto a = moran_dimension(E, 6);
    auto b = moran_dimension(E, 8);
    CHECK(a.s_lo <= a.s);
    CHECK(a.s <= a.s_hi);
    CHECK(std::abs(a.s - b.s) <= std::max(a.s_hi - a.s_lo, 1e-6));
    CHECK(b.s > 0.0);
    CHECK(b.s < 1.0);
    // Level sums of d_w^s stay near 1 (up to the distortion constant).
    double sum = 0.0;
    for (const auto& w : words_of_length(2, 10)) sum += std::pow(E.cylinder_diameter(w), b.s);
    double sum1 = 0.0;
    for (const auto& w : words_of_length(2, 11)) sum1 += std::pow(E.cylinder_diameter(w), b.s);
    CHECK(sum1 / sum == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("cylinder measures form a probability on each level") {
    for (auto E : {fixtures::cantor(), fixtures::half_quarter(), fixtures::moebius_pair()}) {
        double s = moran_dimension(E, 8).s;
        for (std::size_t len : {1u, 3u, 6u}) {
            double total = 0.0;
            for (const auto& w : words_of_length(E.size(), len)) total += cylinder_measure(E, w, s);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    auto E = fixtures::cantor();
    double s = std::log(2.0) / std::log(3.0);
    CHECK(cylinder_measure(E, Word{1, 2, 2}, s) == doctest::Approx(0.125));
    CHECK(cylinder_measure(fixtures::half_quarter(), Word{2}, moran_dimension(fixtures::half_quarter()).s) ==
          doctest::Approx(std::pow(0.25, moran_dimension(fixtures::half_quarter()).s)));
}

TEST_CASE("ball measures bracket exact values") {
    auto E = fixtures::cantor();
    double s = std::log(2.0) / std::log(3.0);
    // B(0, 1/3) meets E in E_1 exactly.
    auto m = ball_measure(E, {0.0}, 1.0 / 3, s, 10);
    CHECK(m.lo <= 0.5 + 1e-12);
    CHECK(m.hi >= 0.5 - 1e-12);
    // B(1/2, 1/7) misses E.
    auto z = ball_measure(E, {0.5}, 1.0 / 7, s, 10);
    CHECK(z.lo == 0.0);
    CHECK(z.hi == 0.0);
    // The whole set.
    auto w = ball_measure(E, {0.5}, 1.0, s, 6);
    CHECK(w.lo == doctest::Approx(1.0));
}

TEST_CASE("density defects vanish for the whole set and not for a cylinder") {
    auto E = fixtures::cantor();
    double s = std::log(2.0) / std::log(3.0);
    auto whole = density_defect(E, SymbolicSubset::whole(), {0.0}, 0.1, s, 10);
    CHECK(whole.hi == 0.0);
    SymbolicSubset A({Word{1}}, 2);
    // Near x = 1/3 (the right end of E_1) the ball of radius 1/2 reaches E_2.
    auto d = density_defect(E, A, {1.0 / 3}, 0.5, s, 10);
    CHECK(d.lo > 0.0);
    auto c = density_certificate(E, A, {0.0}, {0.3, 0.1, 0.03}, s);
    CHECK(c.defects.size() == 3);
    for (const auto& iv : c.defects) CHECK(iv.hi == 0.0);
}

TEST_CASE("Ahlfors bounds for the Cantor set") {
    auto E = fixtures::cantor();
    double s = std::log(2.0) / std::log(3.0);
    auto rep = ahlfors_check(E, s, 200, 4);
    CHECK(rep.samples == 200);
    CHECK(rep.c > 0.0);
    CHECK(rep.c <= rep.C);
    // mu(B(x, r)) <= mu of at most two cylinders of diameter >= r/3 each, so C <= 2 * 3^s.
    CHECK(rep.C <= 2.0 * std::pow(3.0, s) + 1e-9);
    // A ball of radius r centered in E contains a cylinder of diameter >= r/3.
    CHECK(rep.c >= std::pow(3.0, -s) - 1e-9);
}

TEST_CASE("enumeration depth") {
    auto E = fixtures::cantor();
    int d = enumeration_depth(E, 0.01, 16.0);
    CHECK(std::pow(3.0, -d) < 0.01 / 16);
    CHECK(std::pow(3.0, -(d - 1)) >= 0.01 / 16);
}

}
