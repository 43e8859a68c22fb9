#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "crysphon/flat_bundle.hpp"
#include "helpers.hpp"

using namespace crysphon;
using namespace testing_fixtures;

TEST_CASE("bundle validation", "[bundle]") {
    SECTION("two charts with identity transitions are valid") {
        SpaceGroup sg = reflection_1d();
        std::size_t e = sg.point_group().identity_index();
        FlatBundle b(BaseComplex(2, {{0, 1}, {1, 0}}), sg, {e, e});
        CHECK(b.validate().ok());
    }
    SECTION("the twisted cycle is valid") {
        CHECK(mobius_bundle().validate().ok());
    }
    SECTION("an involution on a reverse pair is self-consistent") {
        SpaceGroup sg = reflection_1d();
        std::size_t r = 1 - sg.point_group().identity_index();
        // r = r^-1, so both directions may carry r
        FlatBundle b(BaseComplex(2, {{0, 1}, {1, 0}}), sg, {r, r});
        CHECK(b.validate().ok());
    }
    SECTION("reverse edges carrying non-inverse elements are reported") {
        SpaceGroup sg = glide_pg();
        std::size_t m = 1 - sg.point_group().identity_index();
        std::size_t e = sg.point_group().identity_index();
        FlatBundle b(BaseComplex(2, {{0, 1}, {1, 0}}), sg, {m, e});
        auto report = b.validate();
        CHECK_FALSE(report.ok());
        REQUIRE(report.inverse_violations.size() == 1);
    }
    SECTION("triangle cocycle violation is reported") {
        SpaceGroup sg = reflection_1d();
        std::size_t r = 1 - sg.point_group().identity_index();
        // r * r = identity != r on the closing edge
        FlatBundle b(BaseComplex(3, {{0, 1}, {1, 2}, {0, 2}}, {{0, 1, 2}}), sg, {r, r, r});
        auto report = b.validate();
        CHECK_FALSE(report.ok());
        REQUIRE(report.triangle_violations.size() == 1);
        CHECK(report.triangle_violations[0] == 0);
    }
}

TEST_CASE("holonomy of explicit loops", "[bundle]") {
    SECTION("identity transitions give the identity map") {
        SpaceGroup sg = reflection_1d();
        std::size_t e = sg.point_group().identity_index();
        FlatBundle b = cycle_bundle(sg, {e, e, e});
        CHECK(b.holonomy(cycle_loop(b)).is_identity());
    }
    SECTION("the twisted cycle holonomy is v -> -v") {
        FlatBundle b = mobius_bundle();
        AffineTorusMap hol = b.holonomy(cycle_loop(b));
        CHECK(hol.linear() == IntMatrix{{-1}});
        CHECK(hol.shift() == rat_zero(1));
        TorusPoint v(RatVec{Rat(1, 3)});
        CHECK(hol.apply(v) == TorusPoint(RatVec{Rat(2, 3)}));
    }
    SECTION("a valid triangle boundary has identity holonomy") {
        SpaceGroup sg = glide_pg();
        std::size_t m = 1 - sg.point_group().identity_index();
        std::size_t e = sg.point_group().identity_index();
        // transitions from a potential, so the cocycle condition holds
        FlatBundle b(BaseComplex(3, {{0, 1}, {1, 2}, {0, 2}}, {{0, 1, 2}}), sg, {m, m, e});
        REQUIRE(b.validate().ok());
        Loop tri = Loop::from_steps(b.base(), {{0, true}, {1, true}, {2, false}});
        CHECK(b.holonomy(tri).is_identity());
    }
    SECTION("broken chains are refused") {
        FlatBundle b = mobius_bundle();
        CHECK_THROWS_AS(Loop::from_edges(b.base(), {0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(Loop::from_edges(b.base(), {0, 1}), std::invalid_argument);
    }
}

TEST_CASE("holonomy respects concatenation and reversal", "[bundle]") {
    SpaceGroup sg = screw_p21();
    std::size_t s = 1 - sg.point_group().identity_index();
    std::size_t e = sg.point_group().identity_index();
    FlatBundle b = cycle_bundle(sg, {s, e, e});
    Loop loop = cycle_loop(b);

    AffineTorusMap h = b.holonomy(loop);
    SECTION("concatenation composes, latest loop applied last") {
        std::vector<EdgeStep> twice;
        for (const auto& st : loop.steps()) twice.push_back(st);
        for (const auto& st : loop.steps()) twice.push_back(st);
        AffineTorusMap h2 = b.holonomy(Loop::from_steps(b.base(), twice));
        CHECK(h2 == h.compose(h));
    }
    SECTION("reversal inverts") {
        CHECK(b.holonomy(loop.reversed()) == h.inverse());
        CHECK(b.holonomy(loop.reversed()).compose(h).is_identity());
    }
}

TEST_CASE("equilibrium sections", "[bundle]") {
    SECTION("trivial bundle fixes the whole torus") {
        SpaceGroup sg = screw_p21();
        std::size_t e = sg.point_group().identity_index();
        FlatBundle b = cycle_bundle(sg, {e, e, e});
        auto fixed = b.equilibrium_sections(0);
        REQUIRE_FALSE(fixed.empty);
        CHECK(fixed.dimension == 3);
    }
    SECTION("the twisted cycle has exactly the two involution fixed points") {
        auto fixed = mobius_bundle().equilibrium_sections(0);
        REQUIRE_FALSE(fixed.empty);
        CHECK(fixed.dimension == 0);
        REQUIRE(fixed.representatives.size() == 2);
        std::vector<RatVec> got{fixed.representatives[0].coords, fixed.representatives[1].coords};
        std::sort(got.begin(), got.end());
        CHECK(got[0] == RatVec{Rat(0)});
        CHECK(got[1] == RatVec{Rat(1, 2)});
    }
    SECTION("a screw-twisted circle bundle has no equilibrium section") {
        SpaceGroup sg = screw_p21();
        std::size_t s = 1 - sg.point_group().identity_index();
        std::size_t e = sg.point_group().identity_index();
        FlatBundle b = cycle_bundle(sg, {s, e, e});
        CHECK(b.equilibrium_sections(0).empty);
    }
    SECTION("fixed points are fixed by every holonomy generator, exactly") {
        FlatBundle b = mobius_bundle();
        auto fixed = b.equilibrium_sections(0);
        for (const auto& loop : b.loop_basis(0)) {
            AffineTorusMap h = b.holonomy(loop);
            for (const auto& v : fixed.representatives) REQUIRE(h.apply(v) == v);
        }
    }
}

TEST_CASE("random valid bundles: contractible loops have identity holonomy", "[bundle]") {
    std::mt19937 rng(90210u);
    SpaceGroup sg = cubic_oh();
    std::uniform_int_distribution<std::size_t> chart_count(3, 12);
    std::uniform_int_distribution<std::size_t> pick_elem(0, sg.order() - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    int triangles_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = chart_count(rng);
        // transitions from a random potential: automatically a valid cocycle
        std::vector<std::size_t> potential(n);
        for (auto& q : potential) q = pick_elem(rng);

        std::vector<Edge> edges;
        std::vector<std::size_t> transitions;
        auto add_edge = [&](std::size_t a, std::size_t b) {
            edges.push_back({a, b});
            std::size_t ga = potential[a], gb = potential[b];
            transitions.push_back(sg.point_group().multiply(sg.point_group().inverse(ga), gb));
        };
        for (std::size_t c = 1; c < n; ++c) add_edge(c - 1, c);  // keep it connected
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 2; b < n; ++b)
                if (coin(rng) < 0.25) add_edge(a, b);

        std::vector<Triangle> triangles;
        BaseComplex probe(n, edges);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = b + 1; c < n; ++c)
                    if (probe.edge_index(a, b) && probe.edge_index(b, c) && probe.edge_index(a, c))
                        triangles.push_back({a, b, c});

        FlatBundle bundle(BaseComplex(n, edges, triangles), sg, transitions);
        REQUIRE(bundle.validate().ok());

        for (const auto& tri : triangles) {
            ++triangles_seen;
            Loop boundary = Loop::from_steps(
                bundle.base(), {{*bundle.base().edge_index(tri.a, tri.b), true},
                                {*bundle.base().edge_index(tri.b, tri.c), true},
                                {*bundle.base().edge_index(tri.a, tri.c), false}});
            REQUIRE(bundle.holonomy(boundary).is_identity());
        }
    }
    CHECK(triangles_seen > 200);
}

TEST_CASE("loop basis is deterministic and covers non-tree edges", "[bundle]") {
    FlatBundle b = mobius_bundle();
    auto basis1 = b.loop_basis(0);
    auto basis2 = b.loop_basis(0);
    REQUIRE(basis1.size() == 1);  // cycle rank of a circle
    REQUIRE(basis2.size() == 1);
    REQUIRE(basis1[0].steps().size() == basis2[0].steps().size());
    for (std::size_t i = 0; i < basis1[0].steps().size(); ++i) {
        CHECK(basis1[0].steps()[i].edge == basis2[0].steps()[i].edge);
        CHECK(basis1[0].steps()[i].forward == basis2[0].steps()[i].forward);
    }
}
