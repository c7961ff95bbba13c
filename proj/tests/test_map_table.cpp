#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "lipext/errors.hpp"
#include "lipext/map_table.hpp"

using namespace lipext;

namespace {

// All-pairs ratio extremes.
std::pair<double, double> brute(const std::vector<Point>& xs, const std::vector<Point>& ys) {
    double lo = 1e300, hi = 0.0;
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b) {
            double dx = distance(xs[a], xs[b]);
            if (dx == 0.0) continue;
            double r = distance(ys[a], ys[b]) / dx;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    return {lo, hi};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("lipext_test_" + name);
}

} // namespace

TEST_SUITE("map_table") {

TEST_CASE("ratio bounds of a linear map") {
    std::vector<Point> xs{{0.0}, {0.25}, {1.0}}, ys{{1.0}, {1.5}, {3.0}};
    auto rb = pairwise_ratio_bounds(xs, ys);
    CHECK(rb.min_ratio == doctest::Approx(2.0));
    CHECK(rb.max_ratio == doctest::Approx(2.0));
    CHECK(rb.L_high() == doctest::Approx(2.0));
    auto inv = pairwise_ratio_bounds(ys, xs);
    CHECK(inv.L_high() == doctest::Approx(2.0));
    CHECK(inv.L_low() == doctest::Approx(0.5));
}

TEST_CASE("one-dimensional fast path matches all pairs") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> xs, ys;
        std::size_t n = 2 + gen() % 60;
        for (std::size_t k = 0; k < n; ++k) {
            xs.push_back({u(gen)});
            ys.push_back({u(gen)});
        }
        auto rb = pairwise_ratio_bounds(xs, ys);
        auto [lo, hi] = brute(xs, ys);
        CHECK(rb.max_ratio == doctest::Approx(hi).epsilon(1e-12));
        CHECK(rb.min_ratio == doctest::Approx(lo).epsilon(1e-12));
    }
}

TEST_CASE("one-dimensional fast path is exact for monotone maps") {
    std::mt19937_64 gen(22);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point> xs, ys;
        for (int k = 0; k < 40; ++k) xs.push_back({u(gen)});
        for (const auto& x : xs) ys.push_back({x[0] * x[0] * x[0] + x[0]});
        auto rb = pairwise_ratio_bounds(xs, ys);
        auto [lo, hi] = brute(xs, ys);
        CHECK(rb.min_ratio == doctest::Approx(lo).epsilon(1e-12));
        CHECK(rb.max_ratio == doctest::Approx(hi).epsilon(1e-12));
    }
}

TEST_CASE("planar ratio bounds match all pairs") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Point> xs, ys;
    for (int k = 0; k < 80; ++k) {
        xs.push_back({u(gen), u(gen)});
        ys.push_back({u(gen)});
    }
    auto rb = pairwise_ratio_bounds(xs, ys);
    auto [lo, hi] = brute(xs, ys);
    CHECK(rb.min_ratio == doctest::Approx(lo));
    CHECK(rb.max_ratio == doctest::Approx(hi));
}

TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(pairwise_ratio_bounds({{0.0}}, {{1.0}}), DegenerateError);
    CHECK_THROWS_AS(pairwise_ratio_bounds({{0.0}, {0.0}}, {{1.0}, {1.0}}), DegenerateError);
    auto rb = pairwise_ratio_bounds({{0.0}, {1.0}}, {{2.0}, {2.0}});
    CHECK(std::isinf(rb.L_high()));
}

TEST_CASE("tables survive a CSV round trip") {
    MapTable t;
    t.label = "h";
    t.sources = {{0.1, 0.2}, {1.0 / 3, 2.0 / 7}};
    t.images = {{0.5}, {1e-17}};
    t.provenance = {"1,2", "2"};
    auto path = temp_file("table.csv");
    write_table_csv(path.string(), t);
    MapTable back = read_table_csv(path.string());
    CHECK(back.sources == t.sources);
    CHECK(back.images == t.images);
    CHECK(back.provenance == t.provenance);
    std::ostringstream os;
    write_table_csv(os, t);
    CHECK(os.str().rfind("x1,x2,y1,provenance\n", 0) == 0);
    CHECK(os.str().find("\"1,2\"") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("malformed CSV is an input error") {
    auto path = temp_file("bad.csv");
    {
        std::ofstream os(path);
        os << "x1,y1,provenance\n0.5,abc,\"1\"\n";
    }
    CHECK_THROWS_AS(read_table_csv(path.string()), InputError);
    CHECK_THROWS_AS(read_table_csv(temp_file("missing.csv").string()), InputError);
    std::filesystem::remove(path);
}

TEST_CASE("point lists round trip") {
    auto path = temp_file("points.csv");
    std::vector<Point> pts{{0.0}, {1.0 / 3}, {2.0 / 3}};
    write_points_csv(path.string(), pts, {"1", "2", "3"});
    CHECK(read_points_csv(path.string()) == pts);
    std::filesystem::remove(path);
}

TEST_CASE("verification verdicts") {
    MapTable t;
    t.sources = {{0.0}, {0.5}, {1.0}};
    t.images = {{0.0}, {1.0}, {2.0}};
    t.provenance = {"a", "b", "c"};
    auto into = verify_map_table(t, nullptr, 0.0, VerifyMode::Into);
    CHECK(into.passed);
    CHECK(into.L_high == doctest::Approx(2.0));

    t.claimed_bound = 1.5;
    CHECK_FALSE(verify_map_table(t, nullptr, 0.0, VerifyMode::Into).passed);
    t.claimed_bound.reset();

    std::vector<Point> net{{0.0}, {0.9}, {2.0}};
    auto onto = verify_map_table(t, &net, 0.11, VerifyMode::Onto);
    CHECK(onto.passed);
    CHECK(onto.max_target_gap == doctest::Approx(0.1));
    net.push_back({1.5});
    auto miss = verify_map_table(t, &net, 0.11, VerifyMode::Onto);
    CHECK_FALSE(miss.passed);
    CHECK(miss.witness.find("target point 3") != std::string::npos);

    t.images[1] = {0.0};
    CHECK_FALSE(verify_map_table(t, nullptr, 0.0, VerifyMode::Into).passed);
    CHECK(format_verdict(into).find("verdict = pass") != std::string::npos);
}

}
