#pragma once

// Smith normal form and the mod-lattice linear solver built on it.
// These two routines carry every exact group-theoretic decision downstream:
// splitting of the crystallographic extension and fixed points of affine
// torus actions both reduce to "solve M t = b modulo integer vectors".

#include <cstddef>
#include <vector>

#include "crysphon/exact.hpp"

namespace crysphon {

struct SnfDecomposition {
    IntMatrix u;  // rows x rows, |det| = 1
    IntMatrix s;  // diagonal invariant factors s1 | s2 | ..., then zeros
    IntMatrix v;  // cols x cols, |det| = 1

    std::size_t rank() const {
        std::size_t r = 0, n = std::min(s.rows(), s.cols());
        while (r < n && s(r, r) != 0) ++r;
        return r;
    }
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row a -= q * row b
inline void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) -= q * m(b, j);
}

inline void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) -= q * m(i, b);
}

inline void negate_row(IntMatrix& m, std::size_t a) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}

// Smallest nonzero |entry| in the trailing submatrix, ties broken by lowest
// (row, col); returns false if the submatrix is zero.
inline bool find_pivot(const IntMatrix& a, std::size_t t, std::size_t& pi, std::size_t& pj) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j) {
            if (a(i, j) == 0) continue;
            Int mag = abs(a(i, j));
            if (!found || mag < best) {
                found = true;
                best = mag;
                pi = i;
                pj = j;
            }
        }
    return found;
}

} // namespace detail

/// Deterministic Smith normal form: U * M * V = S.
inline SnfDecomposition smith_normal_form(const IntMatrix& m) {
    if (m.empty())
        throw std::invalid_argument("smith_normal_form: empty matrix");
    const std::size_t rows = m.rows(), cols = m.cols();
    IntMatrix a = m;
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix v = IntMatrix::identity(cols);

    const std::size_t steps = std::min(rows, cols);
    for (std::size_t t = 0; t < steps; ++t) {
        for (;;) {
            std::size_t pi = t, pj = t;
            if (!detail::find_pivot(a, t, pi, pj)) {
                // trailing submatrix is zero; done with the whole matrix
                goto normalized;
            }
            if (pi != t) {
                detail::swap_rows(a, t, pi);
                detail::swap_rows(u, t, pi);
            }
            if (pj != t) {
                detail::swap_cols(a, t, pj);
                detail::swap_cols(v, t, pj);
            }
            // one reduction pass down the column and across the row
            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                Int q = a(i, t) / a(t, t);
                detail::add_row(a, i, t, q);
                detail::add_row(u, i, t, q);
                if (a(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                Int q = a(t, j) / a(t, t);
                detail::add_col(a, j, t, q);
                detail::add_col(v, j, t, q);
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) continue;  // residues became new, smaller pivot candidates
            // pivot divides everything in its row/col; enforce the chain
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols && divides; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        detail::add_row(a, t, i, Int(-1));  // fold row i into row t
                        detail::add_row(u, t, i, Int(-1));
                        divides = false;
                    }
            if (divides) break;
        }
        if (a(t, t) < 0) {
            detail::negate_row(a, t);
            detail::negate_row(u, t);
        }
    }
normalized:
    for (std::size_t t = 0; t < steps; ++t)
        if (a(t, t) < 0) {
            detail::negate_row(a, t);
            detail::negate_row(u, t);
        }
    return SnfDecomposition{std::move(u), std::move(a), std::move(v)};
}

/// Full affine solution structure of  M t = b  (mod Z^rows), t in Q^cols.
struct ModLatticeSolution {
    bool solvable = false;
    RatVec particular;                    // one exact solution (when solvable)
    std::vector<RatVec> free_directions;  // rational basis of ker M over R
    std::vector<RatVec> discrete_offsets; // coset reps mod kernel and Z^cols, in [0,1)^cols

    std::size_t torus_dimension() const { return free_directions.size(); }
};

inline ModLatticeSolution solve_mod_lattice(const IntMatrix& m, const RatVec& b,
                                            std::size_t max_offsets = 1000000) {
    if (b.size() != m.rows())
        throw std::invalid_argument("solve_mod_lattice: dimension mismatch");
    const std::size_t rows = m.rows(), cols = m.cols();
    SnfDecomposition snf = smith_normal_form(m);
    const std::size_t r = snf.rank();

    RatVec c = snf.u * b;

    ModLatticeSolution sol;
    // beyond the rank the system reads 0 = c_i (mod Z)
    for (std::size_t i = r; i < rows; ++i)
        if (!is_integer(c[i])) return sol;
    sol.solvable = true;

    RatVec y = rat_zero(cols);
    for (std::size_t i = 0; i < r; ++i) y[i] = c[i] / Rat(snf.s(i, i));
    sol.particular = snf.v * y;

    for (std::size_t j = r; j < cols; ++j) {
        RatVec dir = rat_zero(cols);
        for (std::size_t i = 0; i < cols; ++i) dir[i] = Rat(snf.v(i, j));
        sol.free_directions.push_back(std::move(dir));
    }

    Int count = 1;
    for (std::size_t i = 0; i < r; ++i) count *= snf.s(i, i);
    if (count > max_offsets)
        throw validation_error("solve_mod_lattice: offset enumeration too large");

    std::vector<Int> k(r, 0);
    for (;;) {
        RatVec yk = rat_zero(cols);
        for (std::size_t i = 0; i < r; ++i) yk[i] = (c[i] + Rat(k[i])) / Rat(snf.s(i, i));
        sol.discrete_offsets.push_back(mod1(snf.v * yk));
        std::size_t i = 0;
        while (i < r) {
            if (++k[i] < snf.s(i, i)) break;
            k[i] = 0;
            ++i;
        }
        if (i == r) break;
    }
    return sol;
}

} // namespace crysphon
