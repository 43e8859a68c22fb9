#pragma once

// Exact integer / rational kernel shared by the group-theoretic layers.
// All decisions that the algebra makes (cocycle integrality, symmorphicity,
// fixed-point sets) are taken in this arithmetic, never in floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "crysphon/errors.hpp"

namespace crysphon {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int rat_num(const Rat& q) { return numerator(q); }
inline Int rat_den(const Rat& q) { return denominator(q); }

inline bool is_integer(const Rat& q) { return rat_den(q) == 1; }

inline bool is_integer_vec(const RatVec& v) {
    for (const auto& q : v)
        if (!is_integer(q)) return false;
    return true;
}

/// Largest integer <= q.
inline Int rat_floor(const Rat& q) {
    Int n = rat_num(q), d = rat_den(q);
    Int t = n / d;
    if (n < 0 && t * d != n) --t;
    return t;
}

/// Reduce into [0,1).
inline Rat mod1(const Rat& q) { return q - Rat(rat_floor(q)); }

inline RatVec mod1(const RatVec& v) {
    RatVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = mod1(v[i]);
    return out;
}

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline Int lcm_denominators(const RatVec& v) {
    Int l = 1;
    for (const auto& q : v) l = boost::multiprecision::lcm(l, rat_den(q));
    return l;
}

inline std::string to_string(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

/// Parse "p/q" or "p" exactly; rejects anything else (including q = 0).
inline Rat parse_rational(const std::string& s) {
    try {
        Rat q;
        std::istringstream is(s);
        if (!(is >> q) || !(is >> std::ws).eof())
            throw config_error("not a rational: '" + s + "'");
        return q;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        throw config_error("not a rational: '" + s + "'");
    }
}

// ---------------------------------------------------------------------------
// Dense row-major matrices over Int and Rat.  Dimensions are small (d <= 5 in
// practice, stacked systems up to a few hundred rows), so no effort is spent
// on blocking or sparsity.
// ---------------------------------------------------------------------------

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            throw std::invalid_argument("IntMatrix: entry count mismatch");
    }
    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw std::invalid_argument("IntMatrix: ragged initializer");
            for (long long x : r) a_.emplace_back(x);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<Int>& entries() const { return a_; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix operator*(const IntMatrix& rhs) const {
        if (cols_ != rhs.rows_)
            throw std::invalid_argument("IntMatrix: product shape mismatch");
        IntMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& x = (*this)(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j)
                    out(i, j) += x * rhs(k, j);
            }
        return out;
    }

    IntMatrix operator-(const IntMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw std::invalid_argument("IntMatrix: sum shape mismatch");
        IntMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - rhs.a_[i];
        return out;
    }

    IntMatrix operator+(const IntMatrix& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw std::invalid_argument("IntMatrix: sum shape mismatch");
        IntMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] + rhs.a_[i];
        return out;
    }

    IntVec operator*(const IntVec& v) const {
        if (cols_ != v.size())
            throw std::invalid_argument("IntMatrix: vector shape mismatch");
        IntVec out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    RatVec operator*(const RatVec& v) const {
        if (cols_ != v.size())
            throw std::invalid_argument("IntMatrix: vector shape mismatch");
        RatVec out(rows_, Rat(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += Rat((*this)(i, j)) * v[j];
        return out;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}
    explicit RatMatrix(const IntMatrix& m) : rows_(m.rows()), cols_(m.cols()) {
        a_.reserve(rows_ * cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) a_.emplace_back(m(i, j));
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const RatMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    RatMatrix operator*(const RatMatrix& rhs) const {
        if (cols_ != rhs.rows_)
            throw std::invalid_argument("RatMatrix: product shape mismatch");
        RatMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& x = (*this)(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j)
                    out(i, j) += x * rhs(k, j);
            }
        return out;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

/// Exact determinant by fraction-free Bareiss elimination.
inline Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

/// Exact inverse by Gauss-Jordan over the rationals.
inline RatMatrix inverse(const RatMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("inverse: matrix not square");
    const std::size_t n = m.rows();
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) throw validation_error("inverse: singular matrix");
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        Rat piv = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            Rat f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

/// Inverse of a unimodular-up-to-sign integer matrix; exact, stays integer.
inline IntMatrix int_inverse(const IntMatrix& m) {
    RatMatrix inv = inverse(RatMatrix(m));
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_integer(inv(i, j)))
                throw validation_error("int_inverse: inverse is not integral");
            out(i, j) = rat_num(inv(i, j));
        }
    return out;
}

/// Positive definiteness via leading principal minors, exact.
inline bool is_positive_definite(const RatMatrix& g) {
    if (g.rows() != g.cols()) return false;
    const std::size_t n = g.rows();
    // Fraction-free not needed at these sizes; rational Gaussian elimination
    // tracking the pivot product of each leading block.
    RatMatrix a = g;
    Rat minor(1);
    for (std::size_t k = 0; k < n; ++k) {
        minor *= a(k, k);
        if (minor <= 0) return false;
        if (a(k, k) == 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            Rat f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return true;
}

inline RatVec operator+(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("RatVec: size mismatch");
    RatVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline RatVec operator-(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("RatVec: size mismatch");
    RatVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline RatVec to_rat(const IntVec& v) {
    RatVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
    return out;
}

inline RatVec rat_zero(std::size_t n) { return RatVec(n, Rat(0)); }

} // namespace crysphon
