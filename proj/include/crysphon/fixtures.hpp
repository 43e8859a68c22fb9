#pragma once

// Built-in configurations.  Shipped in-binary so everything downstream can
// run from a clean checkout:
//   trivial-pm    symmorphic 2-d mirror group, trivial bundle
//   glide-pg-2d   2-d glide line, nonsymmorphic
//   screw-p21-3d  3-d two-fold screw axis, nonsymmorphic, screw-twisted circle
//   mobius-1d     twisted 1-d torus bundle over the circle (3-chart cycle)
//   cubic-oh-3d   full octahedral cubic crystal with elasticity + k-path

#include <string>
#include <vector>

#include "crysphon/config.hpp"

namespace crysphon {

inline std::vector<std::string> fixture_names() {
    return {"trivial-pm", "glide-pg-2d", "screw-p21-3d", "mobius-1d", "cubic-oh-3d"};
}

namespace fixture_detail {

inline std::vector<std::vector<Rat>> identity_gram(std::size_t d) {
    std::vector<std::vector<Rat>> g(d, std::vector<Rat>(d, Rat(0)));
    for (std::size_t i = 0; i < d; ++i) g[i][i] = 1;
    return g;
}

inline std::vector<std::vector<double>> identity_basis(std::size_t d) {
    std::vector<std::vector<double>> b(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) b[i][i] = 1.0;
    return b;
}

} // namespace fixture_detail

inline CrystalConfig fixture(const std::string& name) {
    using fixture_detail::identity_basis;
    using fixture_detail::identity_gram;
    CrystalConfig cfg;
    cfg.name = name;
    if (name == "trivial-pm") {
        cfg.dim = 2;
        cfg.basis_rows = identity_basis(2);
        cfg.gram = identity_gram(2);
        cfg.generators = {{IntMatrix{{1, 0}, {0, -1}}, rat_zero(2)}};
        // trivial 3-chart circle: identity transitions (element 0)
        BundleConfig bc;
        bc.charts = 3;
        bc.edges = {{0, 1, 0}, {1, 2, 0}, {2, 0, 0}};
        bc.section = SectionFixtureConfig{32, 8, 1e-3};
        cfg.bundle = bc;
        return cfg;
    }
    if (name == "glide-pg-2d") {
        cfg.dim = 2;
        cfg.basis_rows = identity_basis(2);
        cfg.gram = identity_gram(2);
        cfg.generators = {{IntMatrix{{-1, 0}, {0, 1}}, RatVec{Rat(0), Rat(1, 2)}}};
        return cfg;
    }
    if (name == "screw-p21-3d") {
        cfg.dim = 3;
        cfg.basis_rows = identity_basis(3);
        cfg.gram = identity_gram(3);
        cfg.generators = {
            {IntMatrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}}, RatVec{Rat(0), Rat(0), Rat(1, 2)}}};
        // circle with the screw crossed twice: nonsymmorphic transitions,
        // trivial total holonomy, so compatible sections exist
        BundleConfig bc;
        bc.charts = 3;
        bc.edges = {{0, 1, 1}, {1, 2, 1}, {2, 0, 0}};
        bc.section = SectionFixtureConfig{32, 8, 1e-3};
        cfg.bundle = bc;
        return cfg;
    }
    if (name == "mobius-1d") {
        cfg.dim = 1;
        cfg.basis_rows = identity_basis(1);
        cfg.gram = identity_gram(1);
        cfg.generators = {{IntMatrix{{-1}}, rat_zero(1)}};
        BundleConfig bc;
        bc.charts = 3;
        bc.edges = {{0, 1, 0}, {1, 2, 0}, {2, 0, 1}};  // one flip around the circle
        bc.section = SectionFixtureConfig{32, 8, 1e-3};
        cfg.bundle = bc;
        return cfg;
    }
    if (name == "cubic-oh-3d") {
        cfg.dim = 3;
        cfg.basis_rows = identity_basis(3);
        cfg.gram = identity_gram(3);
        cfg.generators = {
            {IntMatrix{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}, rat_zero(3)},
            {IntMatrix{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, rat_zero(3)},
            {IntMatrix{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}, rat_zero(3)}};
        ElasticityConfig ec;
        ec.model = ElasticModel::cubic;
        ec.c11 = 1.0;
        ec.c12 = 0.5;
        ec.c44 = 0.3;
        ec.density = 1.0;
        cfg.elasticity = ec;
        KPathConfig kc;
        kc.waypoints = {{0.0, 0.0, 0.0},
                        {1.0, 0.0, 0.0},
                        {1.0, 1.0, 0.0},
                        {1.0, 1.0, 1.0}};
        kc.samples_per_segment = 16;
        cfg.kpath = kc;
        SimulationConfig sc;
        sc.direction = {1.0, 0.0, 0.0};
        sc.samples = 256;
        sc.mode = 1;
        sc.branch = 2;
        sc.amplitude = 1e-3;
        sc.steps = 4096;
        sc.cfl = 0.5;
        cfg.simulation = sc;
        return cfg;
    }
    throw config_error("unknown fixture: " + name);
}

} // namespace crysphon
