#pragma once

// Shared fixture builders for the test suites.

#include "crysphon/flat_bundle.hpp"
#include "crysphon/lattice.hpp"
#include "crysphon/space_group.hpp"

namespace testing_fixtures {

using namespace crysphon;

inline SpaceGroup screw_p21() {
    return SpaceGroup::from_generators(
        Lattice::cubic(3),
        {{IntMatrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}, RatVec{Rat(0), Rat(0), Rat(1, 2)}}});
}

inline SpaceGroup glide_pg() {
    return SpaceGroup::from_generators(
        Lattice::cubic(2), {{IntMatrix{{-1, 0}, {0, 1}}, RatVec{Rat(0), Rat(1, 2)}}});
}

inline SpaceGroup cubic_oh() {
    return SpaceGroup::from_generators(
        Lattice::cubic(3),
        {{IntMatrix{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}, rat_zero(3)},
         {IntMatrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, rat_zero(3)},
         {IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}, rat_zero(3)}});
}

inline SpaceGroup reflection_1d() {
    return SpaceGroup::from_generators(Lattice::cubic(1), {{IntMatrix{{-1}}, rat_zero(1)}});
}

/// Cycle of `m` charts with the given per-edge transitions (edge i -> i+1 mod m).
inline FlatBundle cycle_bundle(const SpaceGroup& sg, const std::vector<std::size_t>& transitions) {
    const std::size_t m = transitions.size();
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < m; ++i) edges.push_back({i, (i + 1) % m});
    return FlatBundle(BaseComplex(m, edges), sg, transitions);
}

/// Twisted 1-d torus bundle over the circle: 3-chart cycle, one flip.
inline FlatBundle mobius_bundle() {
    SpaceGroup sg = reflection_1d();
    std::size_t flip = 1 - sg.point_group().identity_index();
    std::size_t e = sg.point_group().identity_index();
    return cycle_bundle(sg, {e, e, flip});
}

inline Loop cycle_loop(const FlatBundle& bundle) {
    const std::size_t m = bundle.base().chart_count();
    std::vector<std::size_t> edges;
    for (std::size_t i = 0; i < m; ++i) edges.push_back(*bundle.base().edge_index(i, (i + 1) % m));
    return Loop::from_edges(bundle.base(), edges);
}

} // namespace testing_fixtures
