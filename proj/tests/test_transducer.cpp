#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "lipext/errors.hpp"
#include "lipext/transducer.hpp"

using namespace lipext;

TEST_SUITE("transducer") {

TEST_CASE("pair grouping on finite and periodic words") {
    auto h = AddressTransducer::parse(fixtures::kPairGrouping, 2, 4);
    CHECK(h.state_count() == 3);
    CHECK(h.apply(Word{1, 2, 2, 1}) == Word{2, 3});
    CHECK(h.apply(Word{1, 2, 2}) == Word{2});
    InfiniteWord y = h.apply(InfiniteWord::periodic(Word{1, 2}));
    CHECK(y.take(5) == Word{2, 2, 2, 2, 2});
    // An odd cycle needs two passes to return to the start state.
    InfiniteWord z = h.apply(InfiniteWord{Word{}, Word{2, 1, 1}});
    CHECK(z.take(6) == Word{3, 2, 1, 3, 2, 1});
}

TEST_CASE("grouping inverse doubles the address") {
    auto g = AddressTransducer::parse(fixtures::kGroupingInverse, 4, 2);
    CHECK(g.apply(Word{3, 2}) == Word{2, 1, 1, 2});
    auto h = AddressTransducer::parse(fixtures::kPairGrouping, 2, 4);
    for (Word w : {Word{1, 2, 2, 1}, Word{2, 2}, Word{1, 1, 2, 1, 2, 2}}) CHECK(g.apply(h.apply(w)) == w);
}

TEST_CASE("text format") {
    auto t = AddressTransducer::parse("# comment\ninitial b\na, 1 → a, 1\nb, 1 -> a, 2, 2  # trailing\n"
                                      "declared_L 3/2\n");
    CHECK(t.in_alphabet() == 1);
    CHECK(t.out_alphabet() == 2);
    CHECK(t.declared_L().value() == doctest::Approx(1.5));
    CHECK(t.apply(Word{1, 1}) == Word{2, 2, 1});
}

TEST_CASE("malformed transducers") {
    CHECK_THROWS_AS(AddressTransducer::parse("s, 1 -> s, 1\ns, 1 -> s, 2\n"), InputError);
    CHECK_THROWS_AS(AddressTransducer::parse("s, 3 -> s, 1\n", 2, 2), InputError);
    CHECK_THROWS_AS(AddressTransducer::parse("s, 1 -> s, 3\n", 2, 2), InputError);
    CHECK_THROWS_AS(AddressTransducer::parse("s, 1 s, 1\n"), InputError);
    CHECK_THROWS_AS(AddressTransducer::parse(""), InputError);
    // Reading 1 forever emits nothing.
    CHECK_THROWS_AS(AddressTransducer::parse("s, 1 -> s,\ns, 2 -> s, 1\n"), ConfigurationError);
    CHECK_THROWS_AS(AddressTransducer::load("/nonexistent/t.txt"), InputError);
}

TEST_CASE("restricted domains") {
    auto h = AddressTransducer::parse(fixtures::kIdentity2, 2, 2);
    h.restrict_to(SymbolicSubset({Word{1}}, 2));
    CHECK(h.apply(Word{1, 2}) == Word{1, 2});
    CHECK_THROWS_AS(h.apply(Word{2, 1}), DomainError);
    CHECK_THROWS_AS(h.apply(InfiniteWord::periodic(Word{2})), DomainError);
    auto sub = subset_words(h.domain(), 2, 3);
    CHECK(sub.size() == 4);
    for (const auto& w : sub) CHECK(w[0] == 1);
}

TEST_CASE("oracle estimates") {
    auto E = fixtures::cantor(), F = fixtures::ninth4();
    auto pg = AddressTransducer::parse(fixtures::kPairGrouping, 2, 4);
    auto rb = transducer_bilip_estimate(E, F, pg, 6);
    // Both codings describe the same points.
    CHECK(std::abs(rb.L_low() - 1.0) < 1e-9);
    CHECK(std::abs(rb.L_high() - 1.0) < 1e-9);
    auto id = AddressTransducer::parse(fixtures::kIdentity2, 2, 2);
    CHECK(transducer_bilip_estimate(E, E, id, 6).L_high() == doctest::Approx(1.0));
    auto swap = AddressTransducer::parse("s, 1 -> s, 2\ns, 2 -> s, 1\n", 2, 2);
    CHECK(transducer_bilip_estimate(E, E, swap, 6).L_high() == doctest::Approx(1.0));
    CHECK_THROWS(transducer_bilip_estimate(E, E, id, 1));
}

TEST_CASE("a compressing transducer has a growing estimate") {
    auto E = fixtures::cantor();
    auto h = AddressTransducer::parse("s, 1 -> s, 1\ns, 2 -> s, 2, 2\n", 2, 2);
    double a = transducer_bilip_estimate(E, E, h, 6).L_high();
    double b = transducer_bilip_estimate(E, E, h, 8).L_high();
    CHECK(b / a > 2.0);
}

TEST_CASE("address maps from transducers") {
    auto h = AddressTransducer::parse(fixtures::kGroupingInverse, 4, 2).as_map();
    CHECK(h(InfiniteWord::periodic(Word{4})).take(4) == Word{2, 2, 2, 2});
    auto est = map_bilip_estimate(fixtures::ninth4(), fixtures::cantor(), SymbolicSubset::whole(), h, 4);
    CHECK(est.L_high() == doctest::Approx(1.0));
}

}
