#pragma once

// Elastic/density coefficient tensors of the linearized translational
// sector, point-group projection (Reynolds averaging), closed-form cubic
// and isotropic assemblies, stress, and canonical momenta.
//
// Index convention: C(a,b,i,j) with a,b spatial and i,j displacement
// indices; the energy density is (1/2) C(a,b,i,j) d_a phi^i d_b phi^j.
// Major symmetry: C(a,b,i,j) = C(b,a,j,i).  The "objective" flag adds the
// minor symmetries C(a,b,i,j) = C(i,b,a,j) = C(a,j,i,b) (dependence on the
// symmetrized gradient only).

#include <Eigen/Dense>

#include <cstddef>
#include <utility>
#include <vector>

#include "crysphon/errors.hpp"

namespace crysphon {

class ElasticTensor {
public:
    ElasticTensor(std::size_t dim, bool objective = false)
        : dim_(dim), objective_(objective), c_(dim * dim * dim * dim, 0.0) {}

    std::size_t dim() const { return dim_; }
    bool objective() const { return objective_; }
    void set_objective(bool flag) { objective_ = flag; }

    double& operator()(std::size_t a, std::size_t b, std::size_t i, std::size_t j) {
        return c_[((a * dim_ + b) * dim_ + i) * dim_ + j];
    }
    double operator()(std::size_t a, std::size_t b, std::size_t i, std::size_t j) const {
        return c_[((a * dim_ + b) * dim_ + i) * dim_ + j];
    }

    double major_asymmetry() const {
        double worst = 0.0;
        for (std::size_t a = 0; a < dim_; ++a)
            for (std::size_t b = 0; b < dim_; ++b)
                for (std::size_t i = 0; i < dim_; ++i)
                    for (std::size_t j = 0; j < dim_; ++j)
                        worst = std::max(worst,
                                         std::abs((*this)(a, b, i, j) - (*this)(b, a, j, i)));
        return worst;
    }

    double minor_asymmetry() const {
        double worst = 0.0;
        for (std::size_t a = 0; a < dim_; ++a)
            for (std::size_t b = 0; b < dim_; ++b)
                for (std::size_t i = 0; i < dim_; ++i)
                    for (std::size_t j = 0; j < dim_; ++j) {
                        worst = std::max(worst,
                                         std::abs((*this)(a, b, i, j) - (*this)(i, b, a, j)));
                        worst = std::max(worst,
                                         std::abs((*this)(a, b, i, j) - (*this)(a, j, i, b)));
                    }
        return worst;
    }

    double max_abs() const {
        double worst = 0.0;
        for (double x : c_) worst = std::max(worst, std::abs(x));
        return worst;
    }

    ElasticTensor& operator+=(const ElasticTensor& o) {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    ElasticTensor& operator*=(double s) {
        for (double& x : c_) x *= s;
        return *this;
    }

private:
    std::size_t dim_;
    bool objective_;
    std::vector<double> c_;
};

struct IsotropicModuli {
    double lambda = 0.0;
    double mu = 0.0;
    double rho = 1.0;

    bool positivity_ok() const { return mu > 0.0 && lambda + 2.0 * mu > 0.0 && rho > 0.0; }
};

struct CubicModuli {
    double c11 = 0.0;
    double c12 = 0.0;
    double c44 = 0.0;
    double rho = 1.0;

    bool positivity_ok() const {
        return c44 > 0.0 && c11 - c12 > 0.0 && c11 + 2.0 * c12 > 0.0 && rho > 0.0;
    }
};

/// rho_ij = rho delta_ij;  C = lambda d^a_i d^b_j + mu (d_ij d^ab + d^a_j d^b_i).
inline std::pair<Eigen::MatrixXd, ElasticTensor> assemble_isotropic(const IsotropicModuli& m,
                                                                    std::size_t d) {
    Eigen::MatrixXd rho =
        m.rho * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    ElasticTensor c(d, true);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    c(a, b, i, j) = m.lambda * (a == i) * (b == j) +
                                    m.mu * ((i == j) * (a == b) + (a == j) * (b == i));
    return {rho, c};
}

/// Three-constant cubic tensor in the cubic frame (d = 3): normal entries
/// C11/C12, shear entries C44, fully objective.
inline std::pair<Eigen::MatrixXd, ElasticTensor> assemble_cubic(const CubicModuli& m) {
    const std::size_t d = 3;
    Eigen::MatrixXd rho = m.rho * Eigen::MatrixXd::Identity(3, 3);
    ElasticTensor c(d, true);
    // stiffness in pair notation: (i,a),(j,b)
    auto stiffness = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) -> double {
        if (p == q && r == s) return p == r ? m.c11 : m.c12;
        if ((p == r && q == s) || (p == s && q == r)) return m.c44;
        return 0.0;
    };
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) c(a, b, i, j) = stiffness(i, a, j, b);
    return {rho, c};
}

/// Quadratic elastic energy density  (1/2) C(a,b,i,j) grad(i,a) grad(j,b)
/// for a displacement gradient grad(i,a) = d_a phi^i.
inline double elastic_energy(const ElasticTensor& c, const Eigen::MatrixXd& gradient) {
    const std::size_t d = c.dim();
    double w = 0.0;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    w += c(a, b, i, j) * gradient(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) *
                         gradient(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b));
    return 0.5 * w;
}

/// Cubic energy density W_cub(strain).
inline double cubic_energy(const CubicModuli& m, const Eigen::Matrix3d& strain) {
    double w = 0.5 * m.c11 *
               (strain(0, 0) * strain(0, 0) + strain(1, 1) * strain(1, 1) +
                strain(2, 2) * strain(2, 2));
    w += m.c12 * (strain(0, 0) * strain(1, 1) + strain(1, 1) * strain(2, 2) +
                  strain(2, 2) * strain(0, 0));
    w += 2.0 * m.c44 *
         (strain(0, 1) * strain(0, 1) + strain(1, 2) * strain(1, 2) + strain(2, 0) * strain(2, 0));
    return w;
}

/// Cubic stress: sigma_ii = C11 e_ii + C12 sum_{j != i} e_jj;
/// sigma_ij = 2 C44 e_ij for i != j.
inline Eigen::Matrix3d stress(const CubicModuli& m, const Eigen::Matrix3d& strain) {
    Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
    double trace = strain.trace();
    for (int i = 0; i < 3; ++i) sigma(i, i) = m.c11 * strain(i, i) + m.c12 * (trace - strain(i, i));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) sigma(i, j) = 2.0 * m.c44 * strain(i, j);
    return sigma;
}

/// Full orthogonal transform: out(a,b,i,j) = R_ap R_bq R_ik R_jl c(p,q,k,l).
inline ElasticTensor transform_tensor(const ElasticTensor& c, const Eigen::MatrixXd& r) {
    const std::size_t d = c.dim();
    ElasticTensor out(d, c.objective());
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    double acc = 0.0;
                    for (std::size_t p = 0; p < d; ++p)
                        for (std::size_t q = 0; q < d; ++q)
                            for (std::size_t k = 0; k < d; ++k)
                                for (std::size_t l = 0; l < d; ++l)
                                    acc += r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(p)) *
                                           r(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(q)) *
                                           r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) *
                                           r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) *
                                           c(p, q, k, l);
                    out(a, b, i, j) = acc;
                }
    return out;
}

/// Reynolds projector onto the point-group-invariant subspace:
/// the mean of the fully transformed tensor over the listed elements.
/// R_list must be closed under multiplication (a group representation).
inline ElasticTensor project_invariant(const ElasticTensor& c,
                                       const std::vector<Eigen::MatrixXd>& r_list) {
    if (r_list.empty()) throw std::invalid_argument("project_invariant: empty group");
    ElasticTensor acc(c.dim(), c.objective());
    for (const auto& r : r_list) acc += transform_tensor(c, r);
    acc *= 1.0 / static_cast<double>(r_list.size());
    return acc;
}

inline Eigen::MatrixXd project_invariant_density(const Eigen::MatrixXd& rho,
                                                 const std::vector<Eigen::MatrixXd>& r_list) {
    if (r_list.empty()) throw std::invalid_argument("project_invariant_density: empty group");
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rho.rows(), rho.cols());
    for (const auto& r : r_list) acc += r * rho * r.transpose();
    return acc / static_cast<double>(r_list.size());
}

/// Spatial canonical momenta pi_i^a = C(a,b,i,j) grad(j,b) for
/// grad(j,b) = d_b phi^j; returned with pi(i,a).
inline Eigen::MatrixXd noether_momenta(const ElasticTensor& c, const Eigen::MatrixXd& gradient) {
    const std::size_t d = c.dim();
    if (gradient.rows() != static_cast<Eigen::Index>(d) ||
        gradient.cols() != static_cast<Eigen::Index>(d))
        throw std::invalid_argument("noether_momenta: gradient shape mismatch");
    Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                               static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t a = 0; a < d; ++a) {
            double acc = 0.0;
            for (std::size_t b = 0; b < d; ++b)
                for (std::size_t j = 0; j < d; ++j)
                    acc += c(a, b, i, j) *
                           gradient(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b));
            pi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = acc;
        }
    return pi;
}

} // namespace crysphon
