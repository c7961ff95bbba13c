#include <cmath>
#include <random>

#include "doctest.h"
#include "lipext/errors.hpp"
#include "lipext/rational.hpp"

using namespace lipext;

TEST_SUITE("rational") {

TEST_CASE("parses fractions, integers and decimals") {
    CHECK(parse_rational("1/3") == 1.0 / 3.0);
    CHECK(parse_rational("-2/4") == -0.5);
    CHECK(parse_rational(" 8/9 ") == 8.0 / 9.0);
    CHECK(parse_rational("7") == 7.0);
    CHECK(parse_rational("0.25") == 0.25);
    CHECK(parse_rational("1e-4") == 1e-4);
}

TEST_CASE("rejects malformed numbers") {
    CHECK_THROWS_AS(parse_rational(""), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("1/"), InputError);
    CHECK_THROWS_AS(parse_rational("1/3x"), InputError);
}

TEST_CASE("format_double is the shortest round trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.25) == "-2.25");
}

TEST_CASE("format_double round trips random doubles") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> exponent(-300.0, 300.0);
    for (int n = 0; n < 2000; ++n) {
        double v = std::pow(10.0, exponent(gen)) * (n % 2 ? -1.0 : 1.0);
        CHECK(std::stod(format_double(v)) == v);
    }
}

}
