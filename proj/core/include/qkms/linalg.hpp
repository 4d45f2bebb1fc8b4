#pragma once

#include <cassert>
#include <stdexcept>
#include <vector>

#include "qkms/qint.hpp"
#include "qkms/ratfunc.hpp"

namespace qkms {

template <class T>
class Mat {
public:
    Mat() : r_(0), c_(0) {}
    Mat(size_t r, size_t c) : r_(r), c_(c), a_(r * c, T{0}) {}

    static Mat identity(size_t n) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    T& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const T& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

    Mat operator+(const Mat& o) const {
        assert(r_ == o.r_ && c_ == o.c_);
        Mat m(r_, c_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] + o.a_[k];
        return m;
    }
    Mat operator-(const Mat& o) const {
        assert(r_ == o.r_ && c_ == o.c_);
        Mat m(r_, c_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] - o.a_[k];
        return m;
    }
    Mat operator*(const Mat& o) const {
        assert(c_ == o.r_);
        Mat m(r_, o.c_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t k = 0; k < c_; ++k) {
                const T& x = (*this)(i, k);
                if (field_is_zero(x)) continue;
                for (size_t j = 0; j < o.c_; ++j)
                    m(i, j) += x * o(k, j);
            }
        return m;
    }
    Mat scaled(const T& s) const {
        Mat m(r_, c_);
        for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = a_[k] * s;
        return m;
    }
    bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!field_is_zero(x)) return false;
        return true;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        assert(v.size() == c_);
        std::vector<T> out(r_, T{0});
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j)
                if (!field_is_zero((*this)(i, j))) out[i] += (*this)(i, j) * v[j];
        return out;
    }

private:
    size_t r_, c_;
    std::vector<T> a_;
};

inline bool field_is_zero(const Rat& x) { return x == 0; }
inline bool field_is_zero(const RatFunc& x) { return x.is_zero(); }
inline bool field_is_zero(const RatFuncPi& x) { return x.is_zero(); }
inline bool field_is_zero(const RatFuncSqrt& x) { return x.is_zero(); }

inline bool field_is_invertible(const Rat& x) { return x != 0; }
inline bool field_is_invertible(const RatFunc& x) { return !x.is_zero(); }
inline bool field_is_invertible(const RatFuncPi& x) { return x.is_unit(); }
inline bool field_is_invertible(const RatFuncSqrt& x) {
    RatFuncPi nrm = x.ev * x.ev - (x.od * x.od).mul_pi();
    return nrm.is_unit();
}

inline Rat field_inv(const Rat& x) { return Rat(1) / x; }
inline RatFunc field_inv(const RatFunc& x) { return RatFunc(1) / x; }
inline RatFuncPi field_inv(const RatFuncPi& x) { return RatFuncPi(1) / x; }
inline RatFuncSqrt field_inv(const RatFuncSqrt& x) { return x.inverse(); }

/// Gaussian elimination rank over a field type F.  Note that Q(q)^pi is a
/// product of fields, not a field; rank there is computed per component.
template <class F>
size_t gauss_rank(Mat<F> m) {
    size_t rank = 0;
    for (size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        size_t piv = rank;
        while (piv < m.rows() && field_is_zero(m(piv, col))) ++piv;
        if (piv == m.rows()) continue;
        if (piv != rank)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(rank, j));
        F inv = field_inv(m(rank, col));
        for (size_t i = rank + 1; i < m.rows(); ++i) {
            if (field_is_zero(m(i, col))) continue;
            F f = m(i, col) * inv;
            for (size_t j = col; j < m.cols(); ++j)
                m(i, j) = m(i, j) - f * m(rank, j);
        }
        ++rank;
    }
    return rank;
}

/// Solve A x = b over a field type F; empty if inconsistent or singular
/// in the needed pivots.  A is consumed by value.
template <class F>
std::optional<std::vector<F>> solve_linear(Mat<F> a, std::vector<F> b) {
    const size_t n = a.rows(), m = a.cols();
    assert(b.size() == n);
    std::vector<size_t> pivot_col;
    size_t row = 0;
    for (size_t col = 0; col < m && row < n; ++col) {
        size_t piv = row;
        while (piv < n && field_is_zero(a(piv, col))) ++piv;
        if (piv == n) continue;
        if (piv != row) {
            for (size_t j = 0; j < m; ++j) std::swap(a(piv, j), a(row, j));
            std::swap(b[piv], b[row]);
        }
        F inv = field_inv(a(row, col));
        for (size_t j = col; j < m; ++j) a(row, j) = a(row, j) * inv;
        b[row] = b[row] * inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == row || field_is_zero(a(i, col))) continue;
            F f = a(i, col);
            for (size_t j = col; j < m; ++j) a(i, j) = a(i, j) - f * a(row, j);
            b[i] = b[i] - f * b[row];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (size_t i = row; i < n; ++i)
        if (!field_is_zero(b[i])) return std::nullopt;  // inconsistent
    std::vector<F> x(m, F{0});
    for (size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = b[r];
    return x;
}

/// Matrix inverse over a field type F; empty if singular.
template <class F>
std::optional<Mat<F>> invert(const Mat<F>& a) {
    const size_t n = a.rows();
    if (a.cols() != n) throw std::domain_error("invert: matrix not square");
    Mat<F> w = a, inv = Mat<F>::identity(n);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && !field_is_invertible(w(piv, col))) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != col)
            for (size_t j = 0; j < n; ++j) {
                std::swap(w(piv, j), w(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        F ivc = field_inv(w(col, col));
        for (size_t j = 0; j < n; ++j) {
            w(col, j) = w(col, j) * ivc;
            inv(col, j) = inv(col, j) * ivc;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == col || field_is_zero(w(i, col))) continue;
            F f = w(i, col);
            for (size_t j = 0; j < n; ++j) {
                w(i, j) = w(i, j) - f * w(col, j);
                inv(i, j) = inv(i, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Fraction-free Bareiss rank of a matrix over Z[q], exact.
size_t bareiss_rank(Mat<Laurent> m);

/// Rank of an A^pi matrix at the given pi-specialization, by fraction-free
/// elimination over Z[q].
size_t rank_at_pi(const Mat<LaurentPi>& m, int sign);

/// Randomized rational-evaluation rank of the same specialized matrix;
/// used as a cross-check (can under-report, never over-report).
size_t eval_rank_at_pi(const Mat<LaurentPi>& m, int sign, const Rat& point);

/// Column set of the given size whose columns are linearly independent at
/// both pi-specializations simultaneously; greedy with a backtracking
/// fallback.  Empty if no such set exists.
std::optional<std::vector<size_t>> select_pivot_columns(const Mat<LaurentPi>& m,
                                                        size_t target_rank);

}  // namespace qkms
