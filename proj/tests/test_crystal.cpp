#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "crysphon/lattice.hpp"
#include "crysphon/point_group.hpp"
#include "crysphon/space_group.hpp"

using namespace crysphon;

namespace {

SpaceGroup screw_p21() {
    // 2_1 screw about z: A = diag(-1,-1,1), a = (0,0,1/2)
    return SpaceGroup::from_generators(
        Lattice::cubic(3),
        {{IntMatrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}, RatVec{Rat(0), Rat(0), Rat(1, 2)}}});
}

SpaceGroup glide_pg() {
    // glide: A = diag(-1,1), a = (0,1/2)
    return SpaceGroup::from_generators(
        Lattice::cubic(2), {{IntMatrix{{-1, 0}, {0, 1}}, RatVec{Rat(0), Rat(1, 2)}}});
}

SpaceGroup cubic_oh() {
    return SpaceGroup::from_generators(
        Lattice::cubic(3),
        {{IntMatrix{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}, rat_zero(3)},
         {IntMatrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, rat_zero(3)},
         {IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}, rat_zero(3)}});
}

IntMatrix signed_permutation(const std::array<int, 3>& perm, const std::array<int, 3>& sign) {
    IntMatrix m(3, 3);
    for (int j = 0; j < 3; ++j) m(perm[j], j) = sign[j];
    return m;
}

} // namespace

TEST_CASE("point group closure enumeration", "[crystal]") {
    SECTION("1-d reflection group has order 2") {
        auto pg = PointGroup::from_generators({IntMatrix{{-1}}}, RatMatrix::identity(1));
        CHECK(pg.order() == 2);
    }
    SECTION("2-d four-fold rotation has order 4") {
        auto pg = PointGroup::from_generators({IntMatrix{{0, -1}, {1, 0}}}, RatMatrix::identity(2));
        CHECK(pg.order() == 4);
    }
    SECTION("full octahedral group has order 48") {
        auto sg = cubic_oh();
        const auto& pg = sg.point_group();
        REQUIRE(pg.order() == 48);
        // cross-check: the 48 signed permutation matrices are exactly the group
        std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                 {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
        int found = 0;
        for (const auto& perm : perms)
            for (int s0 : {1, -1})
                for (int s1 : {1, -1})
                    for (int s2 : {1, -1})
                        if (pg.find(signed_permutation(perm, {s0, s1, s2})) != PointGroup::npos)
                            ++found;
        CHECK(found == 48);
    }
    SECTION("non-crystallographic generator exceeds the cap") {
        // shear of infinite order
        CHECK_THROWS_AS(
            PointGroup::from_generators({IntMatrix{{1, 1}, {0, 1}}}, RatMatrix::identity(2)),
            validation_error);
    }
    SECTION("generator violating the Gram form is rejected") {
        RatMatrix gram = RatMatrix::identity(2);
        gram(0, 0) = 2;  // no longer preserved by the 90-degree rotation
        CHECK_THROWS_AS(PointGroup::from_generators({IntMatrix{{0, -1}, {1, 0}}}, gram),
                        validation_error);
    }
}

TEST_CASE("extension cocycle values", "[crystal]") {
    SECTION("symmorphic input has identically zero cocycle") {
        auto sg = cubic_oh();
        for (std::size_t p = 0; p < sg.order(); ++p)
            for (std::size_t q = 0; q < sg.order(); ++q)
                for (const auto& c : sg.cocycle(p, q)) REQUIRE(c == 0);
    }
    SECTION("screw 2_1: c(s,s) = (0,0,1)") {
        auto sg = screw_p21();
        REQUIRE(sg.order() == 2);
        std::size_t s = 1 - sg.point_group().identity_index();
        IntVec c = sg.cocycle(s, s);
        CHECK(c == IntVec{0, 0, 1});
    }
    SECTION("glide pg: c(m,m) = (0,1)") {
        auto sg = glide_pg();
        std::size_t m = 1 - sg.point_group().identity_index();
        CHECK(sg.cocycle(m, m) == IntVec{0, 1});
    }
}

TEST_CASE("cocycle identity holds for every admissible group", "[crystal]") {
    CHECK(screw_p21().verify_cocycle_identity().ok);
    CHECK(glide_pg().verify_cocycle_identity().ok);
    auto report = cubic_oh().verify_cocycle_identity();
    CHECK(report.ok);
    CHECK(report.violations.empty());
}

TEST_CASE("inadmissible translations are rejected at construction", "[crystal]") {
    // perturbing a translation by 1/3 breaks integrality of the cocycle
    auto sg = screw_p21();
    std::vector<RatVec> bad;
    for (std::size_t p = 0; p < sg.order(); ++p) bad.push_back(sg.translation(p));
    std::size_t s = 1 - sg.point_group().identity_index();
    bad[s][2] += Rat(1, 3);
    CHECK_THROWS_AS(SpaceGroup(sg.lattice(), sg.point_group(), bad), validation_error);
}

TEST_CASE("symmorphicity verdicts", "[crystal]") {
    SECTION("zero translations give a symmorphic group with witness 0") {
        auto verdict = cubic_oh().is_symmorphic();
        REQUIRE(verdict.symmorphic);
        REQUIRE(verdict.origin_shift.has_value());
        for (const auto& q : *verdict.origin_shift) CHECK(q == 0);
    }
    SECTION("glide pg is not symmorphic") {
        CHECK_FALSE(glide_pg().is_symmorphic().symmorphic);
    }
    SECTION("screw P2_1 is not symmorphic") {
        CHECK_FALSE(screw_p21().is_symmorphic().symmorphic);
    }
    SECTION("an off-origin symmorphic group is detected with its witness") {
        // shift the origin of a symmorphic mirror group; the verdict must
        // stay true and re-shifting by the witness must clear translations
        auto pm = SpaceGroup::from_generators(
            Lattice::cubic(2), {{IntMatrix{{1, 0}, {0, -1}}, rat_zero(2)}});
        RatVec x0{Rat(1, 3), Rat(1, 4)};
        auto shifted = pm.shift_representatives({IntVec{0, 0}, IntVec{0, 0}}, x0);
        auto verdict = shifted.is_symmorphic();
        REQUIRE(verdict.symmorphic);
        auto cleared = shifted.shift_representatives({IntVec{0, 0}, IntVec{0, 0}},
                                                     *verdict.origin_shift);
        for (std::size_t p = 0; p < cleared.order(); ++p)
            for (const auto& q : cleared.translation(p)) CHECK(q == 0);
    }
}

TEST_CASE("verdicts are invariant under representative changes", "[crystal]") {
    std::mt19937 rng(4211u);
    std::uniform_int_distribution<int> num(-2, 2);
    std::uniform_int_distribution<int> den(1, 6);
    auto exercise = [&](const SpaceGroup& sg, bool expected) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<IntVec> b(sg.order(), IntVec(sg.dim(), Int(0)));
            for (std::size_t p = 0; p < sg.order(); ++p) {
                if (p == sg.point_group().identity_index()) continue;
                for (std::size_t i = 0; i < sg.dim(); ++i) b[p][i] = num(rng);
            }
            RatVec x0(sg.dim());
            for (std::size_t i = 0; i < sg.dim(); ++i) x0[i] = Rat(num(rng), den(rng));
            auto shifted = sg.shift_representatives(b, x0);
            REQUIRE(shifted.is_symmorphic().symmorphic == expected);
        }
    };
    exercise(glide_pg(), false);
    exercise(screw_p21(), false);
    exercise(cubic_oh(), true);
}

TEST_CASE("shift_representatives with trivial data is the identity", "[crystal]") {
    auto sg = glide_pg();
    auto same = sg.shift_representatives({IntVec{0, 0}, IntVec{0, 0}}, rat_zero(2));
    for (std::size_t p = 0; p < sg.order(); ++p)
        CHECK(same.translation(p) == sg.translation(p));
}

TEST_CASE("affine torus action", "[crystal]") {
    auto sg = screw_p21();
    std::size_t e = sg.point_group().identity_index();
    std::size_t s = 1 - e;
    TorusPoint v(RatVec{Rat(1, 3), Rat(2, 5), Rat(1, 7)});
    SECTION("identity acts trivially") {
        CHECK(sg.torus_act(e, v) == v);
    }
    SECTION("screw applied twice returns the point") {
        CHECK(sg.torus_act(s, sg.torus_act(s, v)) == v);
    }
    SECTION("action composes through the multiplication table") {
        std::mt19937 rng(55127u);
        std::uniform_int_distribution<int> num(0, 23);
        auto oh = cubic_oh();
        std::uniform_int_distribution<std::size_t> pick(0, oh.order() - 1);
        for (int trial = 0; trial < 100; ++trial) {
            std::size_t p = pick(rng), q = pick(rng);
            RatVec coords(3);
            for (auto& c : coords) c = Rat(num(rng), 24);
            TorusPoint w(coords);
            TorusPoint lhs = oh.torus_act(p, oh.torus_act(q, w));
            TorusPoint rhs = oh.torus_act(oh.point_group().multiply(p, q), w);
            REQUIRE(lhs == rhs);
        }
    }
}

TEST_CASE("lattice validation", "[crystal]") {
    SECTION("asymmetric gram matrix rejected") {
        RatMatrix g(2, 2);
        g(0, 0) = 1;
        g(1, 1) = 1;
        g(0, 1) = Rat(1, 2);
        CHECK_THROWS_AS(Lattice(Eigen::Matrix2d::Identity(), g), validation_error);
    }
    SECTION("indefinite gram matrix rejected") {
        RatMatrix g = RatMatrix::identity(2);
        g(1, 1) = -1;
        CHECK_THROWS_AS(Lattice(Eigen::Matrix2d::Identity(), g), validation_error);
    }
    SECTION("basis disagreeing with the gram matrix rejected") {
        Eigen::Matrix2d b;
        b << 1.0, 0.0, 0.0, 2.0;
        CHECK_THROWS_AS(Lattice(b, RatMatrix::identity(2)), validation_error);
    }
    SECTION("ill-conditioned basis refused by cartesian_representation") {
        Eigen::Matrix2d b;
        b << 1.0, 0.0, 0.0, 1e-9;
        RatMatrix g = RatMatrix::identity(2);
        g(1, 1) = Rat(Int(1), Int(1000000000) * Int(1000000000));
        auto sg = SpaceGroup::from_generators(Lattice(b, g),
                                              {{IntMatrix::identity(2), rat_zero(2)}});
        CHECK_THROWS_AS(sg.cartesian_representation(), std::invalid_argument);
    }
}

TEST_CASE("cartesian representation", "[crystal]") {
    SECTION("identity basis reproduces the integer matrices") {
        auto sg = cubic_oh();
        auto reps = sg.cartesian_representation();
        for (std::size_t p = 0; p < sg.order(); ++p)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    REQUIRE(reps[p](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ==
                            Catch::Approx(static_cast<double>(
                                              sg.point_group().element(p)(i, j).convert_to<long long>()))
                                .margin(1e-14));
    }
    SECTION("hexagonal six-fold rotation maps to the 60-degree Cartesian rotation") {
        Eigen::MatrixXd basis(2, 2);
        basis << 1.0, -0.5, 0.0, std::sqrt(3.0) / 2.0;
        RatMatrix gram(2, 2);
        gram(0, 0) = 1;
        gram(1, 1) = 1;
        gram(0, 1) = Rat(-1, 2);
        gram(1, 0) = Rat(-1, 2);
        auto sg = SpaceGroup::from_generators(Lattice(basis, gram),
                                              {{IntMatrix{{1, -1}, {1, 0}}, rat_zero(2)}});
        REQUIRE(sg.order() == 6);
        auto reps = sg.cartesian_representation();
        std::size_t six = PointGroup::npos;
        for (std::size_t p = 0; p < sg.order(); ++p)
            if (sg.point_group().element(p) == IntMatrix{{1, -1}, {1, 0}}) six = p;
        REQUIRE(six != PointGroup::npos);
        Eigen::MatrixXd expected(2, 2);
        expected << 0.5, -std::sqrt(3.0) / 2.0, std::sqrt(3.0) / 2.0, 0.5;
        CHECK((reps[six] - expected).cwiseAbs().maxCoeff() < 1e-12);
        // homomorphism property across the whole group
        for (std::size_t p = 0; p < sg.order(); ++p)
            for (std::size_t q = 0; q < sg.order(); ++q) {
                Eigen::MatrixXd prod = reps[p] * reps[q];
                std::size_t pq = sg.point_group().multiply(p, q);
                REQUIRE((prod - reps[pq]).cwiseAbs().maxCoeff() < 1e-12);
            }
    }
    SECTION("orthogonality within 1e-12") {
        auto reps = cubic_oh().cartesian_representation();
        for (const auto& r : reps)
            REQUIRE((r.transpose() * r - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
                    1e-12);
    }
}
