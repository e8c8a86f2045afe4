#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace entac {

using Vector = std::vector<double>;

/// Dense row-major matrix. Problem sizes are tabular (a handful to a few
/// thousand rows), so no effort is spent on blocking or views.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 0.0); }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const std::vector<double>& storage() const { return data_; }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Neumaier-compensated accumulator; keeps 1e-12 contracts honest on the
/// ~1e4-term enumeration sums used by the moment computations.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double sup_norm(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double sup_norm(const Matrix& m) {
    double r = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) r = std::max(r, std::abs(m.data()[i]));
    return r;
}

inline double l1_norm(const Vector& v) {
    KahanSum s;
    for (double x : v) s.add(std::abs(x));
    return s.value();
}

inline double l2_norm_sq(const Matrix& m) {
    KahanSum s;
    for (std::size_t i = 0; i < m.size(); ++i) s.add(m.data()[i] * m.data()[i]);
    return s.value();
}

inline double l2_norm(const Matrix& m) { return std::sqrt(l2_norm_sq(m)); }

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    assert(a.same_shape(b));
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    assert(a.same_shape(b));
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

/// Solves a x = b by LU factorization with partial pivoting. Throws on an
/// exactly singular pivot; the systems solved here (I - gamma * stochastic)
/// are nonsingular for gamma < 1.
Vector solve_dense(Matrix a, Vector b);

/// sup-norm of a x - b.
double solve_residual(const Matrix& a, const Vector& x, const Vector& b);

}  // namespace entac
