#include <catch2/catch.hpp>

#include "test_support.hpp"

using namespace paq;
using namespace paqtest;

namespace {

Automaton weak_pipeline(const Automaton& p) {
    return reachable_fraction(rescale(quotient(p, coarsest_partition(p, BisimKind::weak).partition)));
}

/// Padded member: the base plus random convex combinations of existing
/// same-(state, action) targets. Keeps bisimilarity, the quotient property,
/// and (tau combinations of non-self targets) the rescaled predicate.
Automaton pad_member(const Automaton& base, std::mt19937& rng, int extra) {
    std::vector<Transition> trans = base.transitions();
    std::uniform_int_distribution<size_t> pick(0, base.transitions().size() - 1);
    std::uniform_int_distribution<int> weight(0, 4);
    for (int i = 0; i < extra; ++i) {
        const Transition& t1 = base.transitions()[pick(rng)];
        std::vector<Transition> same;
        for (const auto& t : base.transitions())
            if (t.source == t1.source && t.action == t1.action &&
                !(t.action == kTau && t.target.in_support(t.source)))
                same.push_back(t);
        if (same.size() < 2) continue;
        if (t1.action == kTau && t1.target.in_support(t1.source)) continue;
        int w1 = weight(rng), w2 = weight(rng);
        if (w1 + w2 == 0) continue;
        const Transition& t2 = same[pick(rng) % same.size()];
        Rat c = make_rat(w1, w1 + w2);
        SubDist mix = t1.target.scaled(c).oplus(t2.target.scaled(Rat(1) - c));
        trans.push_back({t1.source, t1.action, mix});
    }
    return Automaton(base.states(), base.actions(), trans, base.initial());
}

QuotientSet generate_quotient_set(std::mt19937& rng, BisimKind kind, size_t members) {
    for (;;) {
        Automaton base = rand_automaton(rng, 3, 4);
        Automaton nf = normal_form(base, kind);
        if (nf.transition_count() == 0) continue;
        QuotientSet qs;
        qs.kind = kind;
        qs.members.push_back(nf);
        for (size_t k = 1; k < members; ++k) qs.members.push_back(pad_member(nf, rng, 2));
        return qs;
    }
}

} // namespace

TEST_CASE("align pairs each state with its unique bisimilar partner") {
    Automaton p01 = load_data("p_0_1.pa").automaton;
    Automaton p0h1 = load_data("p_0_half_1.pa").automaton;
    auto aligned = align(p01, p0h1, BisimKind::strong);
    CHECK(aligned.correspondence ==
          std::vector<std::pair<StateId, StateId>>{{1, 1}, {2, 2}, {3, 3}});

    auto self = align(p01, p01, BisimKind::strong);
    CHECK(self.correspondence ==
          std::vector<std::pair<StateId, StateId>>{{1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("align rejects bad inputs with the specific error") {
    Automaton p01 = load_data("p_0_1.pa").automaton;
    Automaton pq1 = load_data("p_quarter_1.pa").automaton;
    CHECK_THROWS_AS(align(pq1, p01, BisimKind::strong), NotBisimilar);

    // Not a quotient: two bisimilar copies of the a-loop state.
    Automaton dup({1, 2, 3}, {kTau, "a", "b"},
                  {{1, kTau, SubDist::make({{2, make_rat(1, 2)}, {3, make_rat(1, 2)}})},
                   {2, "a", SubDist::dirac(2)},
                   {3, "a", SubDist::dirac(3)}},
                  1);
    CHECK_THROWS_AS(align(dup, dup, BisimKind::strong), NotQuotient);

    // Not rescaled: fractional tau self-loop, weak kind only. The loop state
    // still differs from both loop targets, so this is a weak quotient.
    Automaton loop({1, 2, 3}, {kTau, "a", "b"},
                   {{1, kTau, SubDist::make({{1, make_rat(1, 2)},
                                             {2, make_rat(1, 4)},
                                             {3, make_rat(1, 4)}})},
                    {2, "a", SubDist::dirac(2)},
                    {3, "b", SubDist::dirac(3)}},
                   1);
    REQUIRE(is_quotient(loop, BisimKind::weak));
    CHECK_THROWS_AS(align(loop, loop, BisimKind::weak), NotRescaled);
}

TEST_CASE("meet of the weak pair keeps exactly the shared initial transition") {
    Automaton left = load_data("weak_left.pa").automaton;
    Automaton right = load_data("weak_right.pa").automaton;
    Automaton m = meet(left, right, BisimKind::weak);
    auto initial_taus = m.from(m.initial(), kTau);
    REQUIRE(initial_taus.size() == 1);
    std::vector<Rat> weights;
    for (const auto& [s, w] : initial_taus[0].target.weights()) weights.push_back(w);
    CHECK(weights == std::vector<Rat>{make_rat(1, 2), make_rat(1, 2)});
    CHECK(bisimilar(m, left, BisimKind::weak).related);
}

TEST_CASE("meet is idempotent up to isomorphism") {
    for (const char* name : {"p_0_1.pa", "p_0_half_1.pa", "weak_right.pa"}) {
        Automaton p = load_data(name).automaton;
        for (BisimKind kind : {BisimKind::strong, BisimKind::weak}) {
            if (kind == BisimKind::weak && !is_rescaled(p)) continue;
            if (!is_quotient(p, kind)) continue;
            CHECK(iso_equal(meet(p, p, kind), p));
            CHECK(iso_equal(join(p, p, kind), p));
        }
    }
}

TEST_CASE("meet of incomparable family instances is the family bottom") {
    Automaton a = load_data("p_0_half_1.pa").automaton;
    Automaton b = load_data("p_0_third_1.pa").automaton;
    CHECK(iso_equal(meet(a, b, BisimKind::strong), load_data("p_0_1.pa").automaton));
    CHECK(iso_equal(join(load_data("p_0_1.pa").automaton, a, BisimKind::strong), a));
}

TEST_CASE("join of the weak pair carries three initial transitions") {
    Automaton left = load_data("weak_left.pa").automaton;
    Automaton right = load_data("weak_right.pa").automaton;
    Automaton j = join(left, right, BisimKind::weak);
    CHECK(j.from(j.initial(), kTau).size() == 3);
    CHECK(bisimilar(j, right, BisimKind::weak).related);
}

TEST_CASE("leq orders the family by coefficient inclusion") {
    Automaton p01 = load_data("p_0_1.pa").automaton;
    Automaton p0h1 = load_data("p_0_half_1.pa").automaton;
    CHECK(leq(p01, p0h1, BisimKind::strong));
    CHECK(!leq(p0h1, p01, BisimKind::strong));
    CHECK(leq(meet(p01, p0h1, BisimKind::strong), p01, BisimKind::strong));
}

TEST_CASE("extreme points prune convex interior points") {
    ClassDist d2 = SubDist::dirac(2);
    ClassDist d3 = SubDist::dirac(3);
    ClassDist mid = SubDist::make({{2, make_rat(1, 2)}, {3, make_rat(1, 2)}});
    auto ext = extreme_points({d2, d3, mid});
    CHECK(ext == std::vector<ClassDist>{d2, d3});

    CHECK(extreme_points({mid}) == std::vector<ClassDist>{mid});

    // Four corners of a square in two block coordinates: none is a convex
    // combination of the others.
    auto corner = [](long a, long b) {
        return SubDist::make({{1, make_rat(a, 4)}, {2, make_rat(b, 4)}});
    };
    std::vector<ClassDist> square{corner(1, 1), corner(1, 2), corner(2, 1), corner(2, 2)};
    CHECK(extreme_points(square).size() == 4);
}

TEST_CASE("extreme points generate the hull and are individually necessary") {
    std::mt19937 rng(91);
    std::vector<StateId> states{1, 2, 3};
    for (int i = 0; i < 40; ++i) {
        std::vector<ClassDist> points;
        size_t k = 2 + i % 4;
        for (size_t j = 0; j < k; ++j) points.push_back(rand_dist(rng, states));
        auto ext = extreme_points(points);
        REQUIRE(!ext.empty());

        std::set<StateId> keys;
        for (const auto& d : points)
            for (const auto& [s, w] : d.weights()) keys.insert(s);
        std::vector<StateId> dims(keys.begin(), keys.end());
        auto vec = [&](const ClassDist& d) {
            std::vector<Rat> v;
            for (StateId s : dims) v.push_back(d.at(s));
            return v;
        };
        std::vector<std::vector<Rat>> gens;
        for (const auto& e : ext) gens.push_back(vec(e));
        for (const auto& p : points) CHECK(in_convex_hull(vec(p), gens));
        for (size_t drop = 0; drop < ext.size(); ++drop) {
            std::vector<std::vector<Rat>> rest;
            for (size_t j = 0; j < ext.size(); ++j)
                if (j != drop) rest.push_back(vec(ext[j]));
            if (rest.empty()) continue;
            CHECK(!in_convex_hull(vec(ext[drop]), rest));
        }
    }
}

TEST_CASE("reachable polytope vertices are the one-step extreme targets") {
    Automaton p = load_data("p_0_third_half_1.pa").automaton;
    Partition discrete = Partition::identity(p.states());
    auto polytope = reachable_polytope_vertices(p, 1, kTau, discrete);
    CHECK(polytope.source == 1);
    CHECK(polytope.action == kTau);
    CHECK(polytope.vertices == std::vector<ClassDist>{SubDist::dirac(2), SubDist::dirac(3)});
    CHECK(reachable_polytope_vertices(p, 2, kTau, discrete).vertices.empty());
    CHECK(reachable_polytope_vertices(p, 2, "a", discrete).vertices ==
          std::vector<ClassDist>{SubDist::dirac(2)});

    // Under the universal partition every target collapses to one vertex.
    Partition universal = Partition::universal(p.states());
    CHECK(reachable_polytope_vertices(p, 1, kTau, universal).vertices ==
          std::vector<ClassDist>{SubDist::dirac(1)});
}

TEST_CASE("the normal form sits below every generated member") {
    std::mt19937 rng(96);
    for (BisimKind kind : {BisimKind::strong, BisimKind::weak}) {
        for (int i = 0; i < 6; ++i) {
            auto qs = generate_quotient_set(rng, kind, 3);
            for (const auto& member : qs.members)
                CHECK(leq(normal_form(member, kind), member, kind));
        }
    }
}

TEST_CASE("strong normal form of the padded family instances is the bottom") {
    Automaton bottom = load_data("p_0_1.pa").automaton;
    CHECK(strong_normal_form(load_data("p_0_half_1.pa").automaton) ==
          canonical_relabel(bottom).automaton);
    CHECK(iso_equal(normal_form(load_data("p_0_third_half_1.pa").automaton, BisimKind::strong),
                    bottom));
}

TEST_CASE("normal forms are idempotent and merge duplicate states first") {
    Automaton dup({1, 2, 3}, {kTau, "a"},
                  {{1, kTau, SubDist::make({{2, make_rat(1, 2)}, {3, make_rat(1, 2)}})},
                   {2, "a", SubDist::dirac(2)},
                   {3, "a", SubDist::dirac(3)}},
                  1);
    Automaton nf = strong_normal_form(dup);
    CHECK(nf.state_count() == 2);
    CHECK(strong_normal_form(nf) == nf);

    std::mt19937 rng(92);
    for (int i = 0; i < 15; ++i) {
        Automaton p = rand_automaton(rng, 4, 4);
        for (BisimKind kind : {BisimKind::strong, BisimKind::weak}) {
            Automaton once = normal_form(p, kind);
            CHECK(normal_form(once, kind) == once);
            CHECK(bisimilar(p, once, kind).related);
            CHECK(once.transition_count() <= std::max<size_t>(p.transition_count(), 1));
        }
    }
}

TEST_CASE("weak normal form of the weak pair is the shared canonical form") {
    Automaton left = load_data("weak_left.pa").automaton;
    Automaton right = load_data("weak_right.pa").automaton;
    Automaton nf_left = weak_normal_form(left);
    Automaton nf_right = weak_normal_form(right);
    CHECK(nf_left == nf_right); // canonical labeling makes them equal, not just isomorphic
    CHECK(iso_equal(nf_left, meet(left, right, BisimKind::weak)));

    auto initial_taus = nf_left.from(1, kTau);
    REQUIRE(initial_taus.size() == 1);
    CHECK(initial_taus[0].target.mass() == 1);
    CHECK(initial_taus[0].target.support_size() == 2);
}

TEST_CASE("weak normal form drops tau Dirac self-loops") {
    Automaton p({1, 2}, {kTau, "a"},
                {{1, kTau, SubDist::dirac(1)},
                 {1, kTau, SubDist::dirac(2)},
                 {2, "a", SubDist::dirac(2)},
                 {2, kTau, SubDist::dirac(2)}},
                1);
    Automaton nf = weak_normal_form(p);
    for (const auto& t : nf.transitions())
        CHECK(!(t.action == kTau && t.target == SubDist::dirac(t.source)));
}

TEST_CASE("weak normal form already-normal inputs are fixed points") {
    Automaton nf = weak_normal_form(load_data("weak_left.pa").automaton);
    CHECK(weak_normal_form(nf) == nf);
}

TEST_CASE("interior coefficients are pruned by the strong normal form") {
    Automaton p = pa_family({Rat(0), make_rat(1, 3), make_rat(1, 2), Rat(1)});
    CHECK(iso_equal(normal_form(p, BisimKind::strong), load_data("p_0_1.pa").automaton));
}

TEST_CASE("normal form is stable under convex padding") {
    std::mt19937 rng(93);
    for (BisimKind kind : {BisimKind::strong, BisimKind::weak}) {
        for (int i = 0; i < 10; ++i) {
            auto qs = generate_quotient_set(rng, kind, 3);
            Automaton nf = qs.members[0];
            for (const auto& member : qs.members)
                CHECK(iso_equal(normal_form(member, kind), nf));
        }
    }
}

TEST_CASE("weak normal form elimination is order independent") {
    std::mt19937 rng(94);
    int covered = 0;
    for (int i = 0; i < 40 && covered < 6; ++i) {
        Automaton p = rand_automaton(rng, 3, 4);
        Automaton start = weak_pipeline(p);
        if (start.transition_count() > 6 || start.transition_count() < 2) continue;
        ++covered;
        Automaton canonical = weak_normal_form(p);
        std::vector<Transition> order = start.transitions();
        std::sort(order.begin(), order.end());
        do {
            Automaton result = eliminate_with_priority(start, order);
            CHECK(iso_equal(result, canonical));
        } while (std::next_permutation(order.begin(), order.end()));
    }
    CHECK(covered == 6);
}

TEST_CASE("unmatched unreachable states stay out of the meet") {
    // The first operand carries an extra unreachable state 4 that is not
    // bisimilar to any other state; its block is one-sided.
    Automaton extra({1, 2, 3, 4}, {kTau, "a", "b"},
                    {{1, kTau, SubDist::dirac(2)},
                     {1, kTau, SubDist::dirac(3)},
                     {2, "a", SubDist::dirac(2)},
                     {3, "b", SubDist::dirac(3)},
                     {4, "a", SubDist::dirac(4)},
                     {4, "b", SubDist::dirac(4)}},
                    1);
    Automaton p01 = load_data("p_0_1.pa").automaton;
    REQUIRE(is_quotient(extra, BisimKind::strong));
    REQUIRE(bisimilar(extra, p01, BisimKind::strong).related);

    auto aligned = align(extra, p01, BisimKind::strong);
    CHECK(aligned.correspondence.size() == 3); // state 4 is unmatched

    Automaton m = meet(extra, p01, BisimKind::strong);
    CHECK(m.state_count() == 3);
    CHECK(iso_equal(m, p01));

    Automaton j = join(extra, p01, BisimKind::strong);
    CHECK(j.state_count() == 4);
    CHECK(iso_equal(j, extra));

    CHECK(leq(p01, extra, BisimKind::strong));
    CHECK(!leq(extra, p01, BisimKind::strong)); // block of state 4 has no partner
}

TEST_CASE("transitionless automata collapse to a single-state normal form") {
    Automaton p({5, 6, 7}, {kTau, "a"}, {}, 5);
    for (BisimKind kind : {BisimKind::strong, BisimKind::weak}) {
        Automaton nf = normal_form(p, kind);
        CHECK(nf.state_count() == 1);
        CHECK(nf.initial() == 1);
        CHECK(nf.transition_count() == 0);
    }
}

TEST_CASE("the four-member family subset is a bounded lattice") {
    QuotientSet qs;
    qs.kind = BisimKind::strong;
    for (const char* name :
         {"p_0_1.pa", "p_0_third_1.pa", "p_0_half_1.pa", "p_0_third_half_1.pa"})
        qs.members.push_back(load_data(name).automaton);
    LatticeReport report = verify_lattice(qs);
    CHECK(report.meet_closed);
    CHECK(report.join_closed);
    CHECK(report.commutative);
    CHECK(report.associative);
    CHECK(report.absorptive);
    CHECK(report.bound_laws);
    CHECK(report.unique_minimal);
    CHECK(report.dcc);
    REQUIRE(report.bottom);
    CHECK(*report.bottom == 0);
    REQUIRE(report.top);
    CHECK(*report.top == 3);
    CHECK(report.all_laws_hold());
}

TEST_CASE("the weak pair spans a bounded four-member lattice") {
    Automaton left = load_data("weak_left.pa").automaton;
    Automaton right = load_data("weak_right.pa").automaton;
    Automaton bottom = weak_normal_form(left);
    Automaton top = canonical_relabel(join(left, right, BisimKind::weak)).automaton;
    QuotientSet qs{{bottom, left, right, top}, BisimKind::weak};
    LatticeReport report = verify_lattice(qs);
    CHECK(report.all_laws_hold());
    REQUIRE(report.bottom);
    CHECK(*report.bottom == 0);
    REQUIRE(report.top);
    CHECK(*report.top == 3);
}

TEST_CASE("a singleton quotient set is trivially a bounded lattice") {
    QuotientSet qs;
    qs.kind = BisimKind::strong;
    qs.members.push_back(normal_form(load_data("p_0_half_1.pa").automaton, BisimKind::strong));
    LatticeReport report = verify_lattice(qs);
    CHECK(report.all_laws_hold());
    CHECK(report.bottom == report.top);
}

TEST_CASE("a non-closed pair is reported with the missing meet") {
    QuotientSet qs;
    qs.kind = BisimKind::strong;
    qs.members.push_back(load_data("p_0_third_1.pa").automaton);
    qs.members.push_back(load_data("p_0_half_1.pa").automaton);
    LatticeReport report = verify_lattice(qs);
    CHECK(!report.meet_closed);
    REQUIRE(!report.missing.empty());
    CHECK(report.missing[0].find("meet of members 1 and 2") == 0);
    CHECK(!report.unique_minimal); // two incomparable minimal members
    CHECK(!report.bottom);
}

TEST_CASE("invalid quotient sets are rejected with the violated invariant") {
    QuotientSet empty;
    CHECK_THROWS_AS(verify_lattice(empty), InvalidQuotientSet);

    QuotientSet not_bisim;
    not_bisim.kind = BisimKind::strong;
    not_bisim.members.push_back(load_data("p_0_1.pa").automaton);
    not_bisim.members.push_back(load_data("p_quarter_1.pa").automaton);
    CHECK_THROWS_AS(verify_lattice(not_bisim), InvalidQuotientSet);

    QuotientSet not_rescaled;
    not_rescaled.kind = BisimKind::weak;
    not_rescaled.members.push_back(Automaton(
        {1, 2}, {kTau, "a"},
        {{1, kTau, SubDist::make({{1, make_rat(1, 2)}, {2, make_rat(1, 2)}})},
         {2, "a", SubDist::dirac(2)}},
        1));
    CHECK_THROWS_AS(verify_lattice(not_rescaled), InvalidQuotientSet);
}

TEST_CASE("lattice laws hold on generated quotient sets") {
    std::mt19937 rng(95);
    for (BisimKind kind : {BisimKind::strong, BisimKind::weak}) {
        for (int i = 0; i < 8; ++i) {
            auto qs = generate_quotient_set(rng, kind, 3);
            const Automaton& a = qs.members[0];
            const Automaton& b = qs.members[1];
            const Automaton& c = qs.members[2];
            Automaton mab = meet(a, b, kind);
            Automaton jab = join(a, b, kind);
            CHECK(leq(mab, a, kind));
            CHECK(leq(mab, b, kind));
            CHECK(leq(a, jab, kind));
            CHECK(leq(b, jab, kind));
            CHECK(iso_equal(mab, meet(b, a, kind)));
            CHECK(iso_equal(jab, join(b, a, kind)));
            CHECK(iso_equal(meet(a, meet(b, c, kind), kind), meet(mab, c, kind)));
            CHECK(iso_equal(join(a, join(b, c, kind), kind), join(jab, c, kind)));
            CHECK(iso_equal(meet(a, jab, kind), a));
            CHECK(iso_equal(join(a, mab, kind), a));
            CHECK(bisimilar(mab, a, kind).related);
            CHECK(bisimilar(jab, b, kind).related);
            // Universality against the generated members.
            for (const auto& lower : qs.members) {
                if (leq(lower, a, kind) && leq(lower, b, kind))
                    CHECK(leq(lower, mab, kind));
                if (leq(a, lower, kind) && leq(b, lower, kind))
                    CHECK(leq(jab, lower, kind));
            }
        }
    }
}
