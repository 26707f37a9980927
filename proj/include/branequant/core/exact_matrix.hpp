#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <vector>

#include "branequant/core/error.hpp"
#include "branequant/core/numeric.hpp"

namespace bq {

// Dense matrix over an exact ring (BigInt or Rational).
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows * cols), T(0)) {}
    Mat(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_) throw Error(Errc::InvalidArgument, "ragged matrix literal");
            for (const auto& v : r) data_.push_back(v);
        }
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& operator()(int i, int j) { return data_[static_cast<size_t>(i * cols_ + j)]; }
    const T& operator()(int i, int j) const { return data_[static_cast<size_t>(i * cols_ + j)]; }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw Error(Errc::InvalidArgument, "matrix shape mismatch");
        Mat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }
    friend Mat operator+(Mat a, const Mat& b) {
        for (size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend Mat operator-(Mat a, const Mat& b) {
        for (size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    friend Mat operator-(Mat a) {
        for (auto& v : a.data_) v = -v;
        return a;
    }
    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

    std::vector<T> apply(const std::vector<T>& v) const {
        std::vector<T> out(static_cast<size_t>(rows_), T(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    bool is_skew() const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if ((*this)(i, j) != -(*this)(j, i)) return false;
        return true;
    }

    Eigen::MatrixXd to_eigen() const {
        Eigen::MatrixXd m(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(i, j) = static_cast<double>((*this)(i, j));
        return m;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Mat<BigInt>;
using RatMatrix = Mat<Rational>;

inline RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
    return r;
}

inline Rational determinant(RatMatrix a) {
    if (a.rows() != a.cols()) throw Error(Errc::InvalidArgument, "determinant of non-square matrix");
    const int n = a.rows();
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a(r, c) != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (int r = c + 1; r < n; ++r) {
            if (a(r, c) == 0) continue;
            Rational f = a(r, c) / a(c, c);
            for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return det;
}

inline BigInt determinant(const IntMatrix& a) {
    Rational d = determinant(to_rational(a));
    return boost::multiprecision::numerator(d);
}

inline RatMatrix inverse(RatMatrix a) {
    if (a.rows() != a.cols()) throw Error(Errc::InvalidArgument, "inverse of non-square matrix");
    const int n = a.rows();
    RatMatrix inv = RatMatrix::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (a(r, c) != 0) { piv = r; break; }
        if (piv < 0) throw Error(Errc::SingularForm, "matrix is singular");
        if (piv != c)
            for (int j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(c, j));
                std::swap(inv(piv, j), inv(c, j));
            }
        Rational p = a(c, c);
        for (int j = 0; j < n; ++j) {
            a(c, j) /= p;
            inv(c, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) continue;
            Rational f = a(r, c);
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

// Inverse of a unimodular integer matrix, exact.
inline IntMatrix unimodular_inverse(const IntMatrix& a) {
    RatMatrix r = inverse(to_rational(a));
    IntMatrix out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (boost::multiprecision::denominator(r(i, j)) != 1)
                throw Error(Errc::InvalidArgument, "matrix is not unimodular");
            out(i, j) = boost::multiprecision::numerator(r(i, j));
        }
    return out;
}

}  // namespace bq
