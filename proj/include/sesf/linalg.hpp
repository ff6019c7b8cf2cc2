#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sesf {

/// Largest state-space dimension supported by the dense matrix path.
inline constexpr std::size_t kMaxDimension = 8;

/// A nonzero-or-zero real vector with its Euclidean norm cached at construction.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::vector<double> v);
    StateVector(std::initializer_list<double> v) : StateVector(std::vector<double>(v)) {}

    std::size_t dim() const noexcept { return v_.size(); }
    double norm() const noexcept { return norm_; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::span<const double> values() const noexcept { return v_; }

    /// Same direction, unit norm. Throws EvaluationError on the zero vector.
    StateVector normalized() const;

    /// Canonical basis vector e_i of the given dimension.
    static StateVector axis(std::size_t dim, std::size_t i);

    bool operator==(const StateVector& o) const { return v_ == o.v_; }

private:
    std::vector<double> v_;
    double norm_ = 0.0;
};

/// Dense row-major square matrix, dimension <= kMaxDimension.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n);
    Matrix(std::size_t n, std::vector<double> row_major);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);

    std::size_t dim() const noexcept { return n_; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }

    Matrix transposed() const;
    Matrix operator*(const Matrix& o) const;
    Matrix scaled(double f) const;
    StateVector apply(const StateVector& v) const;

    /// Largest absolute entry.
    double max_abs() const;
    /// Largest absolute entry of (*this - o).
    double max_abs_diff(const Matrix& o) const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

}  // namespace sesf
