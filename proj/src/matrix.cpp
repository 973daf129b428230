#include "propersplit/matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "propersplit/errors.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

namespace {

void require_shape(int rows, int cols) {
    if (rows <= 0 || cols <= 0) {
        throw InvalidMatrix("matrix shape must be positive, got " + std::to_string(rows) + "x" +
                            std::to_string(cols));
    }
}

}  // namespace

void validate(const ToleranceConfig& cfg) {
    if (!(cfg.rank_tol_factor > 0.0) || !(cfg.sign_tol > 0.0) || !(cfg.residual_tol > 0.0) ||
        !(cfg.eig_tol > 0.0)) {
        throw PreconditionFailed("tolerance configuration fields must be strictly positive");
    }
}

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    require_shape(rows, cols);
    data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> entries) : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require_shape(rows, cols);
    if (data_.size() != static_cast<std::size_t>(rows) * cols) {
        throw InvalidMatrix("entry count does not match shape " + std::to_string(rows) + "x" +
                            std::to_string(cols));
    }
    check_finite();
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    require_shape(rows_, cols_);
    data_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != cols_) {
            throw InvalidMatrix("ragged initializer list");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite();
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
    Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < m.rows(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    m.check_finite();
    return m;
}

Matrix Matrix::column(const std::vector<double>& entries) {
    return Matrix(static_cast<int>(entries.size()), 1, entries);
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (!same_shape(rhs)) throw DimensionMismatch("matrix addition shape mismatch");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (!same_shape(rhs)) throw DimensionMismatch("matrix subtraction shape mismatch");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
    return out;
}

Matrix Matrix::operator-() const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
    return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw DimensionMismatch("matrix product shape mismatch: " + std::to_string(rows_) + "x" +
                                std::to_string(cols_) + " times " + std::to_string(rhs.rows_) + "x" +
                                std::to_string(rhs.cols_));
    }
    Matrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

Matrix Matrix::operator*(double s) const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * s;
    return out;
}

Matrix operator*(double s, const Matrix& m) { return m * s; }

bool Matrix::equal_entries(const Matrix& rhs) const {
    return same_shape(rhs) && data_ == rhs.data_;
}

double Matrix::frobenius_norm() const {
    double acc = 0.0;
    for (double v : data_) acc += v * v;
    return std::sqrt(acc);
}

double Matrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double row = 0.0;
        for (int j = 0; j < cols_; ++j) row += std::fabs((*this)(i, j));
        if (row > best) best = row;
    }
    return best;
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::fabs(v));
    return best;
}

double Matrix::min_entry() const {
    double best = data_[0];
    for (double v : data_) best = std::min(best, v);
    return best;
}

void Matrix::check_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) throw InvalidMatrix("matrix entry is not finite");
    }
}

double rel_residual(const Matrix& x, const Matrix& y) {
    if (!x.same_shape(y)) throw DimensionMismatch("residual shape mismatch");
    return (x - y).frobenius_norm() / std::max(1.0, y.frobenius_norm());
}

}  // namespace propersplit
