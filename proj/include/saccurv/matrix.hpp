#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "saccurv/scalar.hpp"

namespace saccurv {

/// Dense square-or-rectangular matrix over an exact or floating scalar.
/// Kept deliberately small: the library needs products, sums, traces and
/// powers of desk-scale matrices, nothing more.
template <class S>
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    static Mat zero(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend Mat operator+(const Mat& a, const Mat& b) {
        a.require_same_shape(b);
        Mat out(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
        return out;
    }

    friend Mat operator-(const Mat& a, const Mat& b) {
        a.require_same_shape(b);
        Mat out(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = a.data_[i] - b.data_[i];
        return out;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Mat: shape mismatch in product");
        Mat out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                if (aik == S(0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out(i, j) = out(i, j) + aik * b(k, j);
            }
        return out;
    }

    friend Mat operator*(const S& c, const Mat& a) {
        Mat out(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) out.data_[i] = c * a.data_[i];
        return out;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    S trace() const {
        require_square();
        S t(0);
        for (std::size_t i = 0; i < rows_; ++i) t = t + (*this)(i, i);
        return t;
    }

    Mat transpose() const {
        Mat out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    Mat pow(std::size_t e) const {
        require_square();
        Mat out = identity(rows_);
        for (std::size_t i = 0; i < e; ++i) out = out * (*this);
        return out;
    }

    bool is_zero() const {
        for (const S& x : data_)
            if (!(x == S(0))) return false;
        return true;
    }

    /// Largest |entry|; the residual magnitude used throughout the reports.
    S max_abs() const {
        S m(0);
        for (const S& x : data_) {
            S a = abs_s(x);
            if (m < a) m = a;
        }
        return m;
    }

    std::vector<S> column(std::size_t j) const {
        std::vector<S> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    Mat without_row_col(std::size_t k) const {
        require_square();
        Mat out(rows_ - 1, cols_ - 1);
        for (std::size_t i = 0, oi = 0; i < rows_; ++i) {
            if (i == k) continue;
            for (std::size_t j = 0, oj = 0; j < cols_; ++j) {
                if (j == k) continue;
                out(oi, oj) = (*this)(i, j);
                ++oj;
            }
            ++oi;
        }
        return out;
    }

    void require_square() const {
        if (rows_ != cols_) throw std::invalid_argument("Mat: square matrix required");
    }

  private:
    void require_same_shape(const Mat& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw std::invalid_argument("Mat: shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<S> data_;
};

/// Determinant by cofactor expansion. Exponential, but only used on the
/// desk-scale blocks that fixture validation needs.
template <class S>
S det_cofactor(const Mat<S>& m) {
    m.require_square();
    const std::size_t n = m.rows();
    if (n == 0) return S(1);
    if (n == 1) return m(0, 0);
    S acc(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (m(0, j) == S(0)) continue;
        Mat<S> minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, ok = 0; k < n; ++k) {
                if (k == j) continue;
                minor(i - 1, ok++) = m(i, k);
            }
        S term = m(0, j) * det_cofactor(minor);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

} // namespace saccurv
