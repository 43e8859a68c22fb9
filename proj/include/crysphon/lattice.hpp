#pragma once

#include <Eigen/Dense>

#include "crysphon/exact.hpp"

namespace crysphon {

/// Translation lattice: floating Cartesian basis (columns = generators) plus
/// the exact rational Gram matrix that all symmetry tests are run against.
class Lattice {
public:
    Lattice(Eigen::MatrixXd basis, RatMatrix gram)
        : basis_(std::move(basis)), gram_(std::move(gram)) {
        if (basis_.rows() != basis_.cols())
            throw validation_error("lattice: basis must be square");
        dim_ = static_cast<std::size_t>(basis_.rows());
        if (gram_.rows() != dim_ || gram_.cols() != dim_)
            throw validation_error("lattice: gram/basis dimension mismatch");
        if (!gram_.is_symmetric())
            throw validation_error("lattice: gram matrix not symmetric");
        if (!is_positive_definite(gram_))
            throw validation_error("lattice: gram matrix not positive definite");
        if (dim_ > 0 && std::abs(basis_.determinant()) < 1e-12)
            throw validation_error("lattice: basis columns not independent");
        // loose cross-check that the floating basis matches the exact gram
        Eigen::MatrixXd gf(dim_, dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) gf(i, j) = to_double(gram_(i, j));
        double scale = std::max(1.0, gf.cwiseAbs().maxCoeff());
        if (((basis_.transpose() * basis_) - gf).cwiseAbs().maxCoeff() > 1e-6 * scale)
            throw validation_error("lattice: basis and gram matrix disagree");
    }

    /// Cubic/hypercubic lattice with unit spacing.
    static Lattice cubic(std::size_t dim) {
        return Lattice(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                                 static_cast<Eigen::Index>(dim)),
                       RatMatrix::identity(dim));
    }

    std::size_t dim() const { return dim_; }
    const Eigen::MatrixXd& basis() const { return basis_; }
    const RatMatrix& gram() const { return gram_; }

private:
    Eigen::MatrixXd basis_;
    RatMatrix gram_;
    std::size_t dim_ = 0;
};

} // namespace crysphon
