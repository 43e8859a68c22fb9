#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "crysphon/wave.hpp"

using namespace crysphon;

namespace {

WaveState single_mode_state(const Eigen::MatrixXd& rho, const ElasticTensor& c,
                            const Eigen::Vector3d& direction, std::size_t n, std::size_t m,
                            std::size_t branch) {
    return crysphon::single_mode_state(rho, c, direction, n, m, branch, 1e-3);
}

} // namespace

TEST_CASE("wave simulation basics", "[wave]") {
    CubicModuli m{1.0, 0.5, 0.3, 1.0};
    auto [rho, c] = assemble_cubic(m);
    Eigen::Vector3d dir(1, 0, 0);

    SECTION("zero initial state stays identically zero") {
        WaveState state;
        state.direction = dir;
        state.h = 1.0 / 64.0;
        state.displacement = Eigen::MatrixXd::Zero(3, 64);
        state.velocity = Eigen::MatrixXd::Zero(3, 64);
        auto summary = simulate_wave(rho, c, state, 0.5 * state.h, 200);
        CHECK(summary.final_state.displacement.cwiseAbs().maxCoeff() == 0.0);
        for (const auto& s : summary.energy) CHECK(s.total == 0.0);
        CHECK(summary.energy_drift == 0.0);
        for (const auto& mode : summary.modes) CHECK_FALSE(mode.excited);
    }
    SECTION("CFL violations are refused with the required dt") {
        WaveState state = single_mode_state(rho, c, dir, 64, 1, 2);
        double cmax = max_sound_speed(rho, c, dir);
        double bad_dt = 0.6 * state.h / cmax;
        CHECK_THROWS_AS(simulate_wave(rho, c, state, bad_dt, 10), stability_error);
        CHECK_NOTHROW(simulate_wave(rho, c, state, 0.49 * state.h / cmax, 10));
    }
    SECTION("dominant mode detection") {
        WaveState state = single_mode_state(rho, c, dir, 64, 3, 2);
        auto summary =
            simulate_wave(rho, c, state, 0.4 * state.h / max_sound_speed(rho, c, dir), 50);
        CHECK(summary.mode_number == 3);
    }
}

TEST_CASE("single-mode frequency matches the dispersion oracle", "[wave]") {
    CubicModuli m{1.0, 0.5, 0.3, 1.0};
    auto [rho, c] = assemble_cubic(m);
    Eigen::Vector3d dir(1, 0, 0);
    double cmax = max_sound_speed(rho, c, dir);

    auto frequency_error = [&](std::size_t n, std::size_t branch) {
        WaveState state = single_mode_state(rho, c, dir, n, 1, branch);
        double dt = 0.5 * state.h / cmax;
        double kmag = 2.0 * M_PI;
        double predicted =
            dispersion(rho, c, Eigen::VectorXd(kmag * dir)).omega(static_cast<Eigen::Index>(branch));
        // enough steps for several periods of the slowest branch
        auto steps = static_cast<std::size_t>(std::ceil(5.0 * 2.0 * M_PI / (predicted * dt)));
        auto summary = simulate_wave(rho, c, state, dt, steps, 0.5, 1);
        const auto& mode = summary.modes[branch];
        REQUIRE(mode.excited);
        REQUIRE(mode.predicted_omega == Catch::Approx(predicted));
        return std::abs(mode.observed_omega - predicted) / predicted;
    };

    SECTION("longitudinal branch within 1% at n = 256, improving under refinement") {
        double e64 = frequency_error(64, 2);
        double e128 = frequency_error(128, 2);
        double e256 = frequency_error(256, 2);
        CHECK(e256 < 0.01);
        CHECK(e128 < e64);
        CHECK(e256 < e128);
        // second-order spatial accuracy
        double order = std::log2(e64 / e128);
        CHECK(order > 1.5);
        CHECK(order < 2.5);
    }
    SECTION("transverse branch also matches") {
        CHECK(frequency_error(256, 0) < 0.01);
    }
}

TEST_CASE("leapfrog energy is conserved to roundoff", "[wave]") {
    CubicModuli m{1.0, 0.5, 0.3, 1.0};
    auto [rho, c] = assemble_cubic(m);
    Eigen::Vector3d dir = Eigen::Vector3d(1, 1, 0).normalized();
    WaveState state = single_mode_state(rho, c, dir, 128, 2, 1);
    double dt = 0.5 * state.h / max_sound_speed(rho, c, dir);
    auto summary = simulate_wave(rho, c, state, dt, 2000);
    CHECK(summary.energy.front().total > 0.0);
    CHECK(summary.energy_drift < 1e-9);
    // kinetic and elastic parts really do exchange
    double kin_min = 1e300, kin_max = 0.0;
    for (const auto& s : summary.energy) {
        kin_min = std::min(kin_min, s.kinetic);
        kin_max = std::max(kin_max, s.kinetic);
    }
    CHECK(kin_max > 10.0 * std::max(kin_min, 1e-300));
}

TEST_CASE("energy CSV schema", "[wave]") {
    CubicModuli m{1.0, 0.5, 0.3, 1.0};
    auto [rho, c] = assemble_cubic(m);
    Eigen::Vector3d dir(1, 0, 0);
    WaveState state = single_mode_state(rho, c, dir, 32, 1, 2);
    double dt = 0.4 * state.h / max_sound_speed(rho, c, dir);
    auto summary = simulate_wave(rho, c, state, dt, 5);
    std::ostringstream os;
    write_energy_csv(os, summary.energy);
    std::string text = os.str();
    CHECK(text.substr(0, 32) == "step,time,kinetic,elastic,total\n");
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);  // header + 6 samples
}
