#ifndef IPM_DENSE_HPP
#define IPM_DENSE_HPP

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "ipm/scalar.hpp"

namespace ipm {

template <class T>
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(std::size_t len) : e_(len, ScalarTraits<T>::zero()) {}
    DenseVector(std::initializer_list<T> init) : e_(init) {}
    explicit DenseVector(std::vector<T> e) : e_(std::move(e)) {}

    std::size_t size() const { return e_.size(); }
    const T& operator[](std::size_t i) const { return e_[i]; }
    T& operator[](std::size_t i) { return e_[i]; }

    auto begin() const { return e_.begin(); }
    auto end() const { return e_.end(); }

    friend DenseVector operator+(const DenseVector& a, const DenseVector& b) {
        assert(a.size() == b.size());
        DenseVector r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return r;
    }
    friend DenseVector operator-(const DenseVector& a, const DenseVector& b) {
        assert(a.size() == b.size());
        DenseVector r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
        return r;
    }
    friend DenseVector operator*(const T& c, const DenseVector& a) {
        DenseVector r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
        return r;
    }
    friend DenseVector operator-(const DenseVector& a) {
        DenseVector r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
        return r;
    }

    friend bool operator==(const DenseVector& a, const DenseVector& b) {
        return a.e_ == b.e_;
    }

    bool all_positive() const {
        for (const T& x : e_)
            if (!(x > ScalarTraits<T>::zero())) return false;
        return true;
    }
    bool all_nonnegative() const {
        for (const T& x : e_)
            if (x < ScalarTraits<T>::zero()) return false;
        return true;
    }

    static DenseVector ones(std::size_t len) {
        DenseVector r(len);
        for (std::size_t i = 0; i < len; ++i) r[i] = ScalarTraits<T>::one();
        return r;
    }

private:
    std::vector<T> e_;
};

/// Row-major dense matrix.
template <class T>
class DenseMatrix {
public:
    DenseMatrix() : rows_(0), cols_(0) {}
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, ScalarTraits<T>::zero()) {}
    DenseMatrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        e_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            assert(row.size() == cols_);
            for (const T& x : row) e_.push_back(x);
        }
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    const T& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    T& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

    DenseVector<T> apply(const DenseVector<T>& x) const {
        assert(x.size() == cols_);
        DenseVector<T> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            T acc = ScalarTraits<T>::zero();
            for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[j];
            r[i] = acc;
        }
        return r;
    }

    DenseVector<T> apply_transpose(const DenseVector<T>& y) const {
        assert(y.size() == rows_);
        DenseVector<T> r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) {
            T acc = ScalarTraits<T>::zero();
            for (std::size_t i = 0; i < rows_; ++i) acc += (*this)(i, j) * y[i];
            r[j] = acc;
        }
        return r;
    }

    DenseVector<T> row(std::size_t i) const {
        DenseVector<T> r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    DenseVector<T> col(std::size_t j) const {
        DenseVector<T> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) r[i] = (*this)(i, j);
        return r;
    }

    DenseMatrix select_rows(const std::vector<std::size_t>& idx) const {
        DenseMatrix r(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(idx[i], j);
        return r;
    }

    DenseMatrix select_cols(const std::vector<std::size_t>& idx) const {
        DenseMatrix r(rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(i, idx[j]);
        return r;
    }

    DenseMatrix transposed() const {
        DenseMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    static DenseMatrix identity(std::size_t k) {
        DenseMatrix r(k, k);
        for (std::size_t i = 0; i < k; ++i) r(i, i) = ScalarTraits<T>::one();
        return r;
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> e_;
};

template <class T>
T dot(const DenseVector<T>& a, const DenseVector<T>& b) {
    assert(a.size() == b.size());
    T r = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

template <class T>
DenseVector<T> select(const DenseVector<T>& v, const std::vector<std::size_t>& idx) {
    DenseVector<T> r(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[i] = v[idx[i]];
    return r;
}

} // namespace ipm

#endif
