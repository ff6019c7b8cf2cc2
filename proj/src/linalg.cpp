#include "sesf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sesf/errors.hpp"

namespace sesf {

StateVector::StateVector(std::vector<double> v) : v_(std::move(v)) {
    if (v_.empty() || v_.size() > kMaxDimension)
        throw InvalidArgument("state vector dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
    double s = 0.0;
    for (double x : v_) {
        if (!std::isfinite(x)) throw InvalidArgument("state vector has a non-finite coordinate");
        s += x * x;
    }
    norm_ = std::sqrt(s);
}

StateVector StateVector::normalized() const {
    if (!(norm_ > 0.0)) throw EvaluationError("cannot normalize the zero vector");
    std::vector<double> u(v_);
    for (double& x : u) x /= norm_;
    return StateVector(std::move(u));
}

StateVector StateVector::axis(std::size_t dim, std::size_t i) {
    std::vector<double> u(dim, 0.0);
    u.at(i) = 1.0;
    return StateVector(std::move(u));
}

Matrix::Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
    if (n == 0 || n > kMaxDimension)
        throw InvalidArgument("matrix dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
}

Matrix::Matrix(std::size_t n, std::vector<double> row_major) : Matrix(n) {
    if (row_major.size() != n * n) throw InvalidArgument("matrix data has wrong size");
    a_ = std::move(row_major);
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::transposed() const {
    Matrix m(n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) m(c, r) = (*this)(r, c);
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (o.n_ != n_) throw InvalidArgument("matrix dimension mismatch");
    Matrix m(n_);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t k = 0; k < n_; ++k) {
            const double a = (*this)(r, k);
            for (std::size_t c = 0; c < n_; ++c) m(r, c) += a * o(k, c);
        }
    return m;
}

Matrix Matrix::scaled(double f) const {
    Matrix m(*this);
    for (double& x : m.a_) x *= f;
    return m;
}

StateVector Matrix::apply(const StateVector& v) const {
    if (v.dim() != n_) throw InvalidArgument("matrix/vector dimension mismatch");
    std::vector<double> out(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) out[r] += (*this)(r, c) * v[c];
    for (double x : out)
        if (!std::isfinite(x)) throw EvaluationError("matrix cocycle produced a non-finite vector");
    return StateVector(std::move(out));
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::abs(x));
    return m;
}

double Matrix::max_abs_diff(const Matrix& o) const {
    if (o.n_ != n_) throw InvalidArgument("matrix dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - o.a_[i]));
    return m;
}

}  // namespace sesf
