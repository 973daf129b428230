#pragma once

#include <initializer_list>
#include <vector>

namespace propersplit {

/// Dense real matrix with row-major storage.
///
/// Dimensions are fixed at construction and every constructor rejects
/// empty shapes and non-finite entries. Entries may be overwritten
/// afterwards through the mutable accessor; routines that ingest external
/// data re-validate with check_finite().
class Matrix {
public:
    Matrix(int rows, int cols);
    Matrix(int rows, int cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(int n);
    static Matrix diagonal(const std::vector<double>& d);
    static Matrix column(const std::vector<double>& entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    Matrix transpose() const;

    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix operator-() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator*(double s) const;

    bool same_shape(const Matrix& rhs) const { return rows_ == rhs.rows_ && cols_ == rhs.cols_; }
    bool equal_entries(const Matrix& rhs) const;

    /// Frobenius norm.
    double frobenius_norm() const;
    /// Induced infinity norm (max absolute row sum). For column vectors
    /// this coincides with the max absolute entry.
    double inf_norm() const;
    /// Largest absolute entry.
    double max_abs() const;
    /// Smallest entry (signed).
    double min_entry() const;

    /// Throws InvalidMatrix if any entry is NaN or infinite.
    void check_finite() const;

private:
    int rows_;
    int cols_;
    std::vector<double> data_;
};

Matrix operator*(double s, const Matrix& m);

/// Relative Frobenius distance ||x - y||_F / max(1, ||y||_F).
double rel_residual(const Matrix& x, const Matrix& y);

}  // namespace propersplit
