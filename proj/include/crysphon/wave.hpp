#pragma once

// Leapfrog integration of the linearized wave equation reduced to one
// spatial coordinate along a fixed propagation direction:
//   rho d_t^2 phi = C(n) d_s^2 phi,   C(n) the Christoffel matrix of n.
// Energy diagnostics use the time-staggered (midpoint) discrete energy,
// which the leapfrog conserves exactly for this linear system.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "crysphon/dispersion.hpp"

namespace crysphon {

struct WaveState {
    Eigen::VectorXd direction;    // propagation direction, unit vector
    double h = 1.0;               // periodic grid spacing
    Eigen::MatrixXd displacement; // d x n
    Eigen::MatrixXd velocity;     // d x n

    std::size_t grid_points() const { return static_cast<std::size_t>(displacement.cols()); }
    double length() const { return h * static_cast<double>(grid_points()); }
};

struct EnergySample {
    std::size_t step = 0;
    double time = 0.0;
    double kinetic = 0.0;
    double elastic = 0.0;
    double total = 0.0;
};

struct ModeObservation {
    std::size_t branch = 0;        // dispersion branch index (ascending)
    double predicted_omega = 0.0;  // from the dispersion oracle at the mode k
    double observed_omega = 0.0;   // zero-crossing fit; NaN when not excited
    bool excited = false;
};

struct WaveSummary {
    WaveState final_state;
    std::vector<EnergySample> energy;
    std::vector<ModeObservation> modes;
    std::size_t mode_number = 0;  // spatial harmonic used for the projections
    double max_speed = 0.0;       // sound speed bound used for the CFL check
    double dt = 0.0;
    double energy_drift = 0.0;    // max |E - E0| relative to max(|E0|, 1)
};

/// Largest sound speed along `direction`: max omega at |k| = 1.
inline double max_sound_speed(const Eigen::MatrixXd& rho, const ElasticTensor& c,
                              const Eigen::VectorXd& direction) {
    Eigen::VectorXd n = direction.normalized();
    DispersionResult r = dispersion(rho, c, n);
    return r.omega.maxCoeff();
}

/// Standing plane-wave initial state on the unit-length periodic grid:
/// phi = amplitude * alpha_branch * cos(2 pi m x), v = 0, with the
/// polarization taken from the dispersion solution at k = 2 pi m.
inline WaveState single_mode_state(const Eigen::MatrixXd& rho, const ElasticTensor& c,
                                   const Eigen::VectorXd& direction, std::size_t n,
                                   std::size_t m, std::size_t branch, double amplitude) {
    if (branch >= c.dim()) throw std::invalid_argument("single_mode_state: branch out of range");
    WaveState state;
    state.direction = direction;
    state.h = 1.0 / static_cast<double>(n);
    const auto d = static_cast<Eigen::Index>(c.dim());
    double kmag = 2.0 * M_PI * static_cast<double>(m);
    DispersionResult disp = dispersion(rho, c, Eigen::VectorXd(kmag * direction.normalized()));
    state.displacement.resize(d, static_cast<Eigen::Index>(n));
    state.velocity = Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        double x = state.h * static_cast<double>(i);
        state.displacement.col(static_cast<Eigen::Index>(i)) =
            amplitude * std::cos(kmag * x) *
            disp.polarizations.col(static_cast<Eigen::Index>(branch));
    }
    return state;
}

namespace detail {

/// Dominant spatial harmonic (1..n/2) of the initial state: largest DFT
/// magnitude summed over displacement components, velocity as fallback.
inline std::size_t dominant_mode(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
    const auto n = u.cols();
    std::size_t best = 1;
    double best_mag = -1.0;
    auto scan = [&](const Eigen::MatrixXd& field) {
        for (std::size_t m = 1; m <= static_cast<std::size_t>(n) / 2; ++m) {
            double mag = 0.0;
            for (Eigen::Index comp = 0; comp < field.rows(); ++comp) {
                double re = 0.0, im = 0.0;
                for (Eigen::Index i = 0; i < n; ++i) {
                    double phase = 2.0 * M_PI * static_cast<double>(m) * static_cast<double>(i) /
                                   static_cast<double>(n);
                    re += std::cos(phase) * field(comp, i);
                    im += std::sin(phase) * field(comp, i);
                }
                mag += re * re + im * im;
            }
            if (mag > best_mag + 1e-30) {
                best_mag = mag;
                best = m;
            }
        }
    };
    scan(u);
    if (best_mag <= 1e-24) scan(v);
    return best;
}

} // namespace detail

/// Velocity-half-step (kick-drift-kick) leapfrog.  Refuses dt beyond the
/// CFL bound cfl_limit * h / c_max.  `mode_number`, when given, pins the
/// spatial harmonic used for per-branch frequency extraction.
inline WaveSummary simulate_wave(const Eigen::MatrixXd& rho, const ElasticTensor& c,
                                 const WaveState& initial, double dt, std::size_t steps,
                                 double cfl_limit = 0.5,
                                 std::optional<std::size_t> mode_number = std::nullopt) {
    const auto d = static_cast<Eigen::Index>(c.dim());
    const auto n = initial.displacement.cols();
    if (initial.velocity.rows() != d || initial.displacement.rows() != d ||
        initial.velocity.cols() != n)
        throw std::invalid_argument("simulate_wave: state shape mismatch");
    if (n < 3) throw std::invalid_argument("simulate_wave: need at least 3 grid points");
    if (initial.h <= 0.0 || dt <= 0.0)
        throw std::invalid_argument("simulate_wave: nonpositive step");

    WaveSummary summary;
    summary.dt = dt;
    summary.max_speed = max_sound_speed(rho, c, initial.direction);
    const double dt_max = cfl_limit * initial.h / summary.max_speed;
    if (dt > dt_max * (1.0 + 1e-12)) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "simulate_wave: dt = %.6g violates the stability bound; require dt <= %.6g",
                      dt, dt_max);
        throw stability_error(msg);
    }

    Eigen::VectorXd nhat = initial.direction.normalized();
    Eigen::MatrixXd chris = christoffel(c, nhat);
    Eigen::LLT<Eigen::MatrixXd> llt(rho);
    if (llt.info() != Eigen::Success)
        throw validation_error("simulate_wave: density not positive definite");
    Eigen::MatrixXd rho_inv_chris = llt.solve(chris);

    const double h = initial.h;
    const double inv_h2 = 1.0 / (h * h);
    Eigen::MatrixXd phi = initial.displacement;
    Eigen::MatrixXd vel = initial.velocity;

    auto accel = [&](const Eigen::MatrixXd& f) {
        Eigen::MatrixXd lap(f.rows(), f.cols());
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index prev = (i + n - 1) % n, next = (i + 1) % n;
            lap.col(i) = (f.col(prev) - 2.0 * f.col(i) + f.col(next)) * inv_h2;
        }
        return Eigen::MatrixXd(rho_inv_chris * lap);
    };

    // mode projections: per branch, against the initial spatial profile
    const std::size_t m = mode_number ? *mode_number : detail::dominant_mode(phi, vel);
    summary.mode_number = m;
    const double kmag = 2.0 * M_PI * static_cast<double>(m) / initial.length();
    DispersionResult modes = dispersion(rho, c, Eigen::VectorXd(kmag * nhat));
    std::vector<std::vector<double>> projection(static_cast<std::size_t>(d));
    Eigen::MatrixXd rho_alpha = rho * modes.polarizations;  // alpha^T rho phi per column

    Eigen::MatrixXd reference = phi;  // initial profile for the frequency fit
    auto project = [&](const Eigen::MatrixXd& f, Eigen::Index branch) {
        // sum_i (alpha^T rho f_i) (alpha^T rho f0_i)
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            acc += rho_alpha.col(branch).dot(f.col(i)) * rho_alpha.col(branch).dot(reference.col(i));
        return acc;
    };

    auto midpoint_energy = [&](const Eigen::MatrixXd& f, const Eigen::MatrixXd& v,
                               const Eigen::MatrixXd& a) {
        // kinetic: (1/2) v_minus^T rho v_plus summed, with v_{+-} = v -+ dt/2 a.
        // The staggered product can dip below zero by O(dt^2) at velocity
        // turning points; the total it enters is conserved exactly.
        double kin = 0.0, ela = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::VectorXd vc = v.col(i);
            Eigen::VectorXd ac = a.col(i);
            kin += vc.dot(rho * vc) - 0.25 * dt * dt * ac.dot(rho * ac);
            Eigen::Index next = (i + 1) % n;
            Eigen::VectorXd g = (f.col(next) - f.col(i)) / h;
            ela += g.dot(chris * g);
        }
        return std::make_pair(0.5 * h * kin, 0.5 * h * ela);
    };

    Eigen::MatrixXd acc = accel(phi);
    summary.energy.reserve(steps + 1);
    for (std::size_t step = 0; step <= steps; ++step) {
        auto [kin, ela] = midpoint_energy(phi, vel, acc);
        summary.energy.push_back(
            EnergySample{step, static_cast<double>(step) * dt, kin, ela, kin + ela});
        for (Eigen::Index branch = 0; branch < d; ++branch)
            projection[static_cast<std::size_t>(branch)].push_back(project(phi, branch));
        if (step == steps) break;
        vel += 0.5 * dt * acc;
        phi += dt * vel;
        acc = accel(phi);
        vel += 0.5 * dt * acc;
    }

    const double e0 = summary.energy.front().total;
    double drift = 0.0;
    for (const auto& s : summary.energy) drift = std::max(drift, std::abs(s.total - e0));
    summary.energy_drift = drift == 0.0 ? 0.0 : drift / std::max(std::abs(e0), 1e-300);

    // zero-crossing frequency fit per branch
    double proj_scale = 0.0;
    for (const auto& series : projection)
        for (double x : series) proj_scale = std::max(proj_scale, std::abs(x));
    for (Eigen::Index branch = 0; branch < d; ++branch) {
        const auto& series = projection[static_cast<std::size_t>(branch)];
        ModeObservation obs;
        obs.branch = static_cast<std::size_t>(branch);
        obs.predicted_omega = modes.omega(branch);
        obs.observed_omega = std::numeric_limits<double>::quiet_NaN();
        double amp = 0.0;
        for (double x : series) amp = std::max(amp, std::abs(x));
        if (amp > 1e-12 * std::max(proj_scale, 1.0) && proj_scale > 0.0) {
            std::vector<double> crossings;
            for (std::size_t i = 0; i + 1 < series.size(); ++i) {
                double a = series[i], b = series[i + 1];
                if (a == 0.0 || a * b < 0.0) {
                    double tcross = (static_cast<double>(i) + a / (a - b)) * dt;
                    crossings.push_back(tcross);
                }
            }
            if (crossings.size() >= 2) {
                double mean_gap =
                    (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
                obs.observed_omega = M_PI / mean_gap;
                obs.excited = true;
            }
        }
        summary.modes.push_back(obs);
    }

    summary.final_state = WaveState{initial.direction, h, std::move(phi), std::move(vel)};
    return summary;
}

/// CSV schema: step,time,kinetic,elastic,total.
inline void write_energy_csv(std::ostream& os, const std::vector<EnergySample>& series) {
    os << "step,time,kinetic,elastic,total\n";
    for (const auto& s : series)
        os << s.step << ',' << detail::format_double(s.time) << ','
           << detail::format_double(s.kinetic) << ',' << detail::format_double(s.elastic) << ','
           << detail::format_double(s.total) << "\n";
}

} // namespace crysphon
