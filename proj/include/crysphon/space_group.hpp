#pragma once

// Space groups as (point group, translation parts mod Z^d) over an exact
// lattice: the extension cocycle, symmorphicity decision, the affine torus
// action, and the bridge to Cartesian floating representations.

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "crysphon/exact.hpp"
#include "crysphon/lattice.hpp"
#include "crysphon/point_group.hpp"
#include "crysphon/smith.hpp"

namespace crysphon {

/// Point on the translation torus, lattice coordinates reduced to [0,1)^d.
struct TorusPoint {
    RatVec coords;

    explicit TorusPoint(RatVec c) : coords(mod1(std::move(c))) {}
    TorusPoint() = default;

    std::size_t dim() const { return coords.size(); }
    bool operator==(const TorusPoint& o) const { return coords == o.coords; }
};

struct SymmorphicVerdict {
    bool symmorphic = false;
    std::optional<RatVec> origin_shift;  // witness t with a_p = (I - A_p) t mod Z^d
};

struct CocycleIdentityReport {
    bool ok = true;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> violations;
};

class SpaceGroup {
public:
    /// Direct construction from complete data; validates admissibility:
    /// identity translation vanishes mod Z^d and every cocycle value is an
    /// integer vector.
    SpaceGroup(Lattice lattice, PointGroup group, std::vector<RatVec> translations)
        : lattice_(std::move(lattice)), group_(std::move(group)) {
        const std::size_t n = group_.order(), d = group_.dim();
        if (lattice_.dim() != d)
            throw validation_error("space group: lattice/group dimension mismatch");
        if (translations.size() != n)
            throw validation_error("space group: one translation per element required");
        translations_.reserve(n);
        for (auto& t : translations) {
            if (t.size() != d)
                throw validation_error("space group: translation dimension mismatch");
            translations_.push_back(mod1(t));
        }
        for (const auto& q : translations_[group_.identity_index()])
            if (q != 0)
                throw validation_error("space group: identity translation nonzero mod Z^d");
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (!is_integer_vec(cocycle_raw(p, q)))
                    throw validation_error(
                        "space group: translations are not a crystallographic extension");
    }

    /// Affine closure of generator pairs (A, a) in the quotient by the
    /// lattice.  Rejects input whose closure repeats a linear part with a
    /// different translation (the lattice would not be the full translation
    /// subgroup) or fails to close within `cap`.
    static SpaceGroup from_generators(const Lattice& lattice,
                                      const std::vector<std::pair<IntMatrix, RatVec>>& generators,
                                      std::size_t cap = 1024) {
        const std::size_t d = lattice.dim();
        for (const auto& [a, t] : generators) {
            if (a.rows() != d || a.cols() != d || t.size() != d)
                throw validation_error("space group: generator dimension mismatch");
            if (!preserves_gram(a, lattice.gram()))
                throw validation_error("space group: generator does not preserve the Gram form");
        }
        std::vector<IntMatrix> linear;
        std::vector<RatVec> trans;
        std::map<std::vector<Int>, std::size_t> index;
        auto push = [&](const IntMatrix& m, const RatVec& t) -> bool {
            auto [it, inserted] = index.try_emplace(m.entries(), linear.size());
            if (inserted) {
                linear.push_back(m);
                trans.push_back(t);
                return true;
            }
            if (trans[it->second] != t)
                throw validation_error(
                    "space group: translations are not a crystallographic extension");
            return false;
        };
        push(IntMatrix::identity(d), rat_zero(d));
        for (std::size_t i = 0; i < linear.size(); ++i) {
            for (const auto& [ag, tg] : generators) {
                // (a1,A1)(a2,A2) = (a1 + A1 a2, A1 A2), reduced mod Z^d
                IntMatrix prod = linear[i] * ag;
                RatVec shift = mod1(trans[i] + linear[i] * tg);
                if (push(prod, shift) && linear.size() > cap)
                    throw validation_error("space group: not finite within cap");
            }
        }
        PointGroup pg = PointGroup::from_elements(std::move(linear), lattice.gram());
        return SpaceGroup(lattice, std::move(pg), std::move(trans));
    }

    const Lattice& lattice() const { return lattice_; }
    const PointGroup& point_group() const { return group_; }
    std::size_t order() const { return group_.order(); }
    std::size_t dim() const { return group_.dim(); }
    const RatVec& translation(std::size_t p) const { return translations_.at(p); }

    /// c(p,q) = a_p + A_p a_q - a_{pq}; integral by the admissibility check.
    IntVec cocycle(std::size_t p, std::size_t q) const {
        RatVec c = cocycle_raw(p, q);
        IntVec out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!is_integer(c[i]))
                throw validation_error("space group: inconsistent space group data");
            out[i] = rat_num(c[i]);
        }
        return out;
    }

    /// Exhaustive exact check of A_p c(q,r) - c(pq,r) + c(p,qr) - c(p,q) = 0.
    CocycleIdentityReport verify_cocycle_identity() const {
        const std::size_t n = order();
        std::vector<std::vector<IntVec>> c(n, std::vector<IntVec>(n));
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) c[p][q] = cocycle(p, q);
        CocycleIdentityReport report;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                for (std::size_t r = 0; r < n; ++r) {
                    IntVec lhs = group_.element(p) * c[q][r];
                    const IntVec& c2 = c[group_.multiply(p, q)][r];
                    const IntVec& c3 = c[p][group_.multiply(q, r)];
                    const IntVec& c4 = c[p][q];
                    bool zero = true;
                    for (std::size_t i = 0; i < dim() && zero; ++i)
                        zero = (lhs[i] - c2[i] + c3[i] - c4[i]) == 0;
                    if (!zero) {
                        report.ok = false;
                        report.violations.emplace_back(p, q, r);
                    }
                }
        return report;
    }

    /// Splitting test: symmorphic iff some origin t solves
    /// a_p = (I - A_p) t (mod Z^d) for every p simultaneously.
    SymmorphicVerdict is_symmorphic() const {
        const std::size_t n = order(), d = dim();
        SymmorphicVerdict verdict;
        if (n <= 1) {
            verdict.symmorphic = true;
            verdict.origin_shift = rat_zero(d);
            return verdict;
        }
        IntMatrix stacked((n - 1) * d, d);
        RatVec rhs;
        rhs.reserve((n - 1) * d);
        IntMatrix id = IntMatrix::identity(d);
        std::size_t row = 0;
        for (std::size_t p = 0; p < n; ++p) {
            if (p == group_.identity_index()) continue;
            IntMatrix block = id - group_.element(p);
            for (std::size_t i = 0; i < d; ++i, ++row)
                for (std::size_t j = 0; j < d; ++j) stacked(row, j) = block(i, j);
            for (const auto& q : translations_[p]) rhs.push_back(q);
        }
        ModLatticeSolution sol = solve_mod_lattice(stacked, rhs);
        verdict.symmorphic = sol.solvable;
        if (sol.solvable) verdict.origin_shift = mod1(sol.particular);
        return verdict;
    }

    /// Change of representatives: a'_p = a_p + b_p + (A_p - I) x0, mod Z^d.
    /// Integer shifts b act trivially on the stored reduction; the origin
    /// change x0 is what actually moves the representative cocycle.
    SpaceGroup shift_representatives(const std::vector<IntVec>& b, const RatVec& x0) const {
        const std::size_t n = order(), d = dim();
        if (b.size() != n)
            throw std::invalid_argument("shift_representatives: one shift per element");
        for (const auto& q : b[group_.identity_index()])
            if (q != 0)
                throw std::invalid_argument("shift_representatives: identity shift must vanish");
        if (x0.size() != d)
            throw std::invalid_argument("shift_representatives: origin dimension mismatch");
        IntMatrix id = IntMatrix::identity(d);
        std::vector<RatVec> shifted;
        shifted.reserve(n);
        for (std::size_t p = 0; p < n; ++p) {
            RatVec delta = (group_.element(p) - id) * x0;
            shifted.push_back(mod1(translations_[p] + to_rat(b[p]) + delta));
        }
        return SpaceGroup(lattice_, group_, std::move(shifted));
    }

    /// [v] -> [A_p v + a_p] on the torus.
    TorusPoint torus_act(std::size_t p, const TorusPoint& v) const {
        if (v.dim() != dim())
            throw std::invalid_argument("torus_act: dimension mismatch");
        return TorusPoint(group_.element(p) * v.coords + translations_[p]);
    }

    /// Cartesian orthogonal matrices R_p = B A_p B^-1.
    std::vector<Eigen::MatrixXd> cartesian_representation() const {
        const Eigen::MatrixXd& basis = lattice_.basis();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis);
        double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
        if (!(cond <= 1e8))
            throw std::invalid_argument("cartesian_representation: basis ill-conditioned");
        Eigen::MatrixXd binv = basis.inverse();
        std::vector<Eigen::MatrixXd> reps;
        reps.reserve(order());
        const auto d = static_cast<Eigen::Index>(dim());
        for (std::size_t p = 0; p < order(); ++p) {
            Eigen::MatrixXd a(d, d);
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j)
                    a(i, j) = static_cast<double>(group_.element(
                        static_cast<std::size_t>(p))(static_cast<std::size_t>(i),
                                                     static_cast<std::size_t>(j)).convert_to<long long>());
            Eigen::MatrixXd r = basis * a * binv;
            if ((r.transpose() * r - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
                throw validation_error("cartesian_representation: representation not orthogonal; "
                                       "basis and gram matrix are inconsistent");
            reps.push_back(std::move(r));
        }
        return reps;
    }

private:
    RatVec cocycle_raw(std::size_t p, std::size_t q) const {
        const RatVec& ap = translations_[p];
        const RatVec& aq = translations_[q];
        const RatVec& apq = translations_[group_.multiply(p, q)];
        return ap + group_.element(p) * aq - apq;
    }

    Lattice lattice_;
    PointGroup group_;
    std::vector<RatVec> translations_;
};

} // namespace crysphon
