#pragma once

// Christoffel (acoustic) matrices and the generalized eigenvalue problem
// for phonon frequencies, plus k-path tabulation with CSV output.

#include <Eigen/Dense>

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "crysphon/elastic.hpp"
#include "crysphon/errors.hpp"

namespace crysphon {

/// C_ij(k) = C(a,b,i,j) k_a k_b; symmetric whenever C has major symmetry.
inline Eigen::MatrixXd christoffel(const ElasticTensor& c, const Eigen::VectorXd& k) {
    const std::size_t d = c.dim();
    if (k.size() != static_cast<Eigen::Index>(d))
        throw std::invalid_argument("christoffel: wave vector dimension mismatch");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    acc += c(a, b, i, j) * k(static_cast<Eigen::Index>(a)) *
                           k(static_cast<Eigen::Index>(b));
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    return out;
}

/// Closed-form cubic Christoffel matrix:
/// C44 |k|^2 delta_ij + (C12+C44) k_i k_j + (C11-C12-2C44) k_i^2 delta_ij.
inline Eigen::Matrix3d cubic_christoffel(const CubicModuli& m, const Eigen::Vector3d& k) {
    Eigen::Matrix3d out = m.c44 * k.squaredNorm() * Eigen::Matrix3d::Identity();
    out += (m.c12 + m.c44) * (k * k.transpose());
    double aniso = m.c11 - m.c12 - 2.0 * m.c44;
    for (int i = 0; i < 3; ++i) out(i, i) += aniso * k(i) * k(i);
    return out;
}

struct DispersionResult {
    Eigen::VectorXd k;
    Eigen::VectorXd omega;          // sorted ascending, >= 0
    Eigen::VectorXd omega_squared;  // signed generalized eigenvalues
    Eigen::MatrixXd polarizations;  // columns, rho-orthonormal
    bool unstable = false;          // some eigenvalue below -tolerance
};

/// Solve C(k) alpha = omega^2 rho alpha by Cholesky reduction to a symmetric
/// standard eigenproblem.  Negative eigenvalues beyond tolerance flag the
/// result as unstable; frequencies are sqrt(max(eigenvalue, 0)).
inline DispersionResult dispersion(const Eigen::MatrixXd& rho, const ElasticTensor& c,
                                   const Eigen::VectorXd& k, double instability_tol = 1e-12) {
    const auto d = static_cast<Eigen::Index>(c.dim());
    Eigen::LLT<Eigen::MatrixXd> llt(rho);
    if (llt.info() != Eigen::Success)
        throw validation_error("dispersion: density not positive definite");
    Eigen::MatrixXd ch = christoffel(c, k);
    Eigen::MatrixXd l = llt.matrixL();
    // B = L^-1 C L^-T, symmetric with the same generalized eigenvalues
    Eigen::MatrixXd b = l.triangularView<Eigen::Lower>().solve(ch);
    b = l.triangularView<Eigen::Lower>().solve(b.transpose()).transpose();
    b = 0.5 * (b + b.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);

    DispersionResult out;
    out.k = k;
    out.omega_squared = es.eigenvalues();
    out.omega = Eigen::VectorXd::Zero(d);
    double scale = std::max(1.0, out.omega_squared.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < d; ++i) {
        double w2 = out.omega_squared(i);
        if (w2 < -instability_tol * scale) out.unstable = true;
        out.omega(i) = w2 > 0.0 ? std::sqrt(w2) : 0.0;
    }
    // alpha = L^-T y is rho-orthonormal when y is orthonormal
    Eigen::MatrixXd alpha = l.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    // deterministic sign: largest-magnitude entry positive
    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::Index imax = 0;
        alpha.col(j).cwiseAbs().maxCoeff(&imax);
        if (alpha(imax, j) < 0.0) alpha.col(j) = -alpha.col(j);
    }
    out.polarizations = std::move(alpha);
    return out;
}

struct KPathRow {
    double t = 0.0;  // cumulative arc length along the path
    Eigen::VectorXd k;
    Eigen::VectorXd omega;
    bool unstable = false;
};

/// Piecewise-linear sweep through the waypoints, endpoints inclusive,
/// interior waypoints emitted once.
inline std::vector<KPathRow> kpath_sweep(const Eigen::MatrixXd& rho, const ElasticTensor& c,
                                         const std::vector<Eigen::VectorXd>& waypoints,
                                         std::size_t samples_per_segment) {
    if (waypoints.empty()) throw std::invalid_argument("kpath_sweep: no waypoints");
    if (waypoints.size() > 1 && samples_per_segment < 2)
        throw std::invalid_argument("kpath_sweep: need >= 2 samples per segment");
    std::vector<KPathRow> rows;
    auto emit = [&](double t, const Eigen::VectorXd& k) {
        DispersionResult r = dispersion(rho, c, k);
        rows.push_back(KPathRow{t, k, r.omega, r.unstable});
    };
    emit(0.0, waypoints[0]);
    double t0 = 0.0;
    for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
        const Eigen::VectorXd& a = waypoints[seg];
        const Eigen::VectorXd& b = waypoints[seg + 1];
        double seg_len = (b - a).norm();
        for (std::size_t j = 1; j < samples_per_segment; ++j) {
            double f = static_cast<double>(j) / static_cast<double>(samples_per_segment - 1);
            emit(t0 + f * seg_len, a + f * (b - a));
        }
        t0 += seg_len;
    }
    return rows;
}

namespace detail {

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace detail

/// CSV schema: t,kx,ky,kz,omega1,...,omegaD.  Missing k components (d < 3)
/// are written as 0 so the header is stable across dimensions.
inline void write_dispersion_csv(std::ostream& os, const std::vector<KPathRow>& rows,
                                 std::size_t d) {
    if (d > 3) throw std::invalid_argument("dispersion csv: supports d <= 3");
    os << "t,kx,ky,kz";
    for (std::size_t i = 1; i <= d; ++i) os << ",omega" << i;
    os << "\n";
    for (const auto& row : rows) {
        os << detail::format_double(row.t);
        for (std::size_t i = 0; i < 3; ++i)
            os << ','
               << detail::format_double(i < d ? row.k(static_cast<Eigen::Index>(i)) : 0.0);
        for (Eigen::Index i = 0; i < row.omega.size(); ++i)
            os << ',' << detail::format_double(row.omega(i));
        os << "\n";
    }
}

} // namespace crysphon
