#include <catch2/catch.hpp>

#include "test_support.hpp"

using namespace paq;
using namespace paqtest;

TEST_CASE("make drops zeros and tracks mass exactly") {
    SubDist d = SubDist::make({{2, make_rat(1, 2)}, {3, make_rat(1, 2)}});
    CHECK(d.mass() == 1);
    CHECK(d.at(2) == make_rat(1, 2));
    CHECK(d.support() == std::set<StateId>{2, 3});

    SubDist none = SubDist::make({});
    CHECK(none.is_empty());
    CHECK(none.mass() == 0);
    CHECK(none.support().empty());

    SubDist zeros = SubDist::make({{1, Rat(0)}, {2, make_rat(3, 4)}});
    CHECK(zeros.support() == std::set<StateId>{2});

    CHECK_THROWS_AS(SubDist::make({{2, make_rat(3, 4)}, {3, make_rat(1, 2)}}), MassExceedsOne);
    CHECK_THROWS_AS(SubDist::make({{2, make_rat(1, 4)}, {2, make_rat(1, 4)}}), DuplicateState);
}

TEST_CASE("oplus sums pointwise") {
    SubDist half2 = SubDist::dirac(2).scaled(make_rat(1, 2));
    SubDist half3 = SubDist::dirac(3).scaled(make_rat(1, 2));
    SubDist sum = half2.oplus(half3);
    CHECK(sum == SubDist::make({{2, make_rat(1, 2)}, {3, make_rat(1, 2)}}));

    SubDist mu = SubDist::make({{1, make_rat(1, 3)}});
    CHECK(mu.oplus(SubDist::empty()) == mu);

    CHECK_THROWS_AS(SubDist::dirac(2).scaled(make_rat(3, 4))
                        .oplus(SubDist::dirac(3).scaled(make_rat(1, 2))),
                    MassExceedsOne);
}

TEST_CASE("scale multiplies every weight") {
    CHECK(scale(make_rat(1, 2), SubDist::dirac(2)) == SubDist::make({{2, make_rat(1, 2)}}));
    CHECK(scale(Rat(0), SubDist::make({{1, make_rat(1, 2)}, {4, make_rat(1, 4)}})) ==
          SubDist::empty());
    CHECK_THROWS_AS(scale(Rat(3), SubDist::make({{2, make_rat(1, 2)}})), MassExceedsOne);
}

TEST_CASE("minus removes exactly one support point") {
    SubDist d = SubDist::make({{1, make_rat(1, 4)}, {2, make_rat(3, 4)}});
    CHECK(minus(d, 1) == SubDist::make({{2, make_rat(3, 4)}}));
    CHECK(minus(SubDist::dirac(5), 5) == SubDist::empty());
    CHECK_THROWS_AS(minus(SubDist::dirac(2), 3), NotInSupport);
}

TEST_CASE("oplus is commutative and additive in mass") {
    std::mt19937 rng(2024);
    std::vector<StateId> states{1, 2, 3, 4, 5};
    for (int i = 0; i < 200; ++i) {
        SubDist a = rand_subdist(rng, states);
        SubDist b = rand_subdist(rng, states);
        if (a.mass() + b.mass() > 1) continue;
        CHECK(a.oplus(b) == b.oplus(a));
        CHECK(a.oplus(b).mass() == a.mass() + b.mass());
    }
}

TEST_CASE("scaling composes multiplicatively") {
    std::mt19937 rng(2025);
    std::vector<StateId> states{1, 2, 3, 4};
    for (int i = 0; i < 100; ++i) {
        SubDist m = rand_subdist(rng, states);
        CHECK(scale(Rat(1), m) == m);
        Rat c = rand_rat(rng, 4, 8);
        Rat c2 = rand_rat(rng, 4, 8);
        if (c * c2 * m.mass() > 1 || c2 * m.mass() > 1) continue;
        CHECK(scale(c, scale(c2, m)) == scale(c * c2, m));
    }
}

TEST_CASE("tv distance on the worked pairs") {
    CHECK(tv_distance(SubDist::dirac(2), SubDist::dirac(3)) == 1);
    SubDist even = SubDist::make({{2, make_rat(1, 2)}, {3, make_rat(1, 2)}});
    SubDist skew = SubDist::make({{2, make_rat(1, 4)}, {3, make_rat(3, 4)}});
    CHECK(tv_distance(even, even) == 0);
    CHECK(tv_distance(even, skew) == make_rat(1, 4));
    CHECK(tv_distance(even, skew) == tv_subset_oracle(even, skew));
}

TEST_CASE("tv distance satisfies the metric axioms on random distributions") {
    std::mt19937 rng(99);
    std::vector<StateId> states{1, 2, 3, 4, 5, 6};
    for (int i = 0; i < 200; ++i) {
        SubDist a = rand_dist(rng, states);
        SubDist b = rand_dist(rng, states);
        SubDist c = rand_dist(rng, states);
        CHECK(tv_distance(a, b) == tv_distance(b, a));
        CHECK((tv_distance(a, b) == 0) == (a == b));
        CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c));
    }
}

TEST_CASE("tv distance equals the subset enumeration oracle") {
    std::mt19937 rng(100);
    std::vector<StateId> states{1, 2, 3, 4};
    for (int i = 0; i < 150; ++i) {
        SubDist a = rand_subdist(rng, states);
        SubDist b = rand_subdist(rng, states);
        CHECK(tv_distance(a, b) == tv_subset_oracle(a, b));
    }
}
