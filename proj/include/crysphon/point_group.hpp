#pragma once

// Finite point groups as integer matrices in lattice coordinates, with
// closure enumeration and multiplication/inverse tables.

#include <cstddef>
#include <map>
#include <vector>

#include "crysphon/exact.hpp"
#include "crysphon/lattice.hpp"

namespace crysphon {

/// A^T G A = G over the exact Gram form; this is the lattice-coordinate
/// statement of "orthogonal and lattice-preserving".
inline bool preserves_gram(const IntMatrix& a, const RatMatrix& gram) {
    if (a.rows() != a.cols() || a.rows() != gram.rows()) return false;
    RatMatrix ar(a);
    RatMatrix lhs = RatMatrix(a.transpose()) * gram * ar;
    return lhs == gram;
}

class PointGroup {
public:
    /// The closure-enumeration constructor: smallest group containing the
    /// generators, or an error if it does not close within `cap`.
    static PointGroup from_generators(const std::vector<IntMatrix>& generators,
                                      const RatMatrix& gram, std::size_t cap = 1024) {
        const std::size_t d = gram.rows();
        for (const auto& g : generators) {
            if (g.rows() != d || g.cols() != d)
                throw validation_error("point group: generator dimension mismatch");
            if (!preserves_gram(g, gram))
                throw validation_error("point group: generator does not preserve the Gram form");
            Int det = determinant(g);
            if (det != 1 && det != -1)
                throw validation_error("point group: generator determinant not +-1");
        }
        PointGroup pg;
        pg.dim_ = d;
        std::map<std::vector<Int>, std::size_t> index;
        auto push = [&](const IntMatrix& m) -> bool {
            auto [it, inserted] = index.try_emplace(m.entries(), pg.elements_.size());
            if (inserted) pg.elements_.push_back(m);
            return inserted;
        };
        push(IntMatrix::identity(d));
        // breadth-first closure, deterministic order
        for (std::size_t i = 0; i < pg.elements_.size(); ++i) {
            for (const auto& g : generators) {
                IntMatrix prod = pg.elements_[i] * g;
                if (push(prod) && pg.elements_.size() > cap)
                    throw validation_error("point group: not finite within cap");
            }
        }
        pg.build_tables(index);
        return pg;
    }

    /// Wrap an already-closed element list (identity must be element 0).
    static PointGroup from_elements(std::vector<IntMatrix> elements, const RatMatrix& gram) {
        PointGroup pg;
        pg.dim_ = gram.rows();
        pg.elements_ = std::move(elements);
        std::map<std::vector<Int>, std::size_t> index;
        for (std::size_t i = 0; i < pg.elements_.size(); ++i) {
            if (!preserves_gram(pg.elements_[i], gram))
                throw validation_error("point group: element does not preserve the Gram form");
            if (!index.try_emplace(pg.elements_[i].entries(), i).second)
                throw validation_error("point group: duplicate element");
        }
        pg.build_tables(index);
        return pg;
    }

    std::size_t order() const { return elements_.size(); }
    std::size_t dim() const { return dim_; }
    std::size_t identity_index() const { return identity_; }

    const IntMatrix& element(std::size_t p) const { return elements_.at(p); }
    const std::vector<IntMatrix>& elements() const { return elements_; }

    std::size_t multiply(std::size_t p, std::size_t q) const { return mult_.at(p).at(q); }
    std::size_t inverse(std::size_t p) const { return inverse_.at(p); }

    /// Index of a matrix in the group, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find(const IntMatrix& m) const {
        for (std::size_t i = 0; i < elements_.size(); ++i)
            if (elements_[i] == m) return i;
        return npos;
    }

private:
    void build_tables(const std::map<std::vector<Int>, std::size_t>& index) {
        const std::size_t n = elements_.size();
        identity_ = npos;
        IntMatrix id = IntMatrix::identity(dim_);
        for (std::size_t i = 0; i < n; ++i)
            if (elements_[i] == id) {
                identity_ = i;
                break;
            }
        if (identity_ == npos)
            throw validation_error("point group: identity missing");
        mult_.assign(n, std::vector<std::size_t>(n));
        inverse_.assign(n, npos);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                IntMatrix prod = elements_[p] * elements_[q];
                auto it = index.find(prod.entries());
                if (it == index.end())
                    throw validation_error("point group: not closed under multiplication");
                mult_[p][q] = it->second;
                if (it->second == identity_) inverse_[p] = q;
            }
        for (std::size_t p = 0; p < n; ++p)
            if (inverse_[p] == npos)
                throw validation_error("point group: element without inverse");
    }

    std::size_t dim_ = 0;
    std::vector<IntMatrix> elements_;
    std::vector<std::vector<std::size_t>> mult_;
    std::vector<std::size_t> inverse_;
    std::size_t identity_ = 0;
};

} // namespace crysphon
