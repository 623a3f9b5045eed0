#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "msqrt/errors.hpp"

namespace msqrt {

using DenseVector = std::vector<double>;

// Row-major dense matrix. Storage is plain doubles; no ownership tricks.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Summation is a fixed binary tree: split at m = ceil(n/2), recurse on both
// halves. Every reduction in the library goes through this tree; the order is
// part of the contract and must not be re-associated.
double pairwise_sum(std::span<const double> a);

// Dot product: form all products, then pairwise_sum them.
double pairwise_dot(std::span<const double> a, std::span<const double> b);

// Checked variants for the cancellation-free code paths: when sign checks are
// enabled, every operand must be >= 0, so no addition inside the tree can mix
// signs. Violations throw errc::sign_violation.
double pairwise_sum_nonneg(std::span<const double> a);
double pairwise_dot_nonneg(std::span<const double> a, std::span<const double> b);

bool sign_checks_enabled();
void set_sign_checks(bool on);

// C = A*B, every entry a pairwise_dot of a row of A with a column of B.
DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b);

DenseVector mat_vec(const DenseMatrix& a, const DenseVector& x);

// Same products through the checked dots (see pairwise_dot_nonneg).
DenseMatrix mat_mul_nonneg(const DenseMatrix& a, const DenseMatrix& b);
DenseVector mat_vec_nonneg(const DenseMatrix& a, const DenseVector& x);

// Max row sum of |entries|, rows reduced by pairwise_sum.
double inf_norm(const DenseMatrix& a);
double inf_norm(const DenseVector& v);

// Elementwise a ./ b; zero divisor is an error naming the index.
DenseVector comp_div(const DenseVector& a, const DenseVector& b);

DenseMatrix transpose(const DenseMatrix& a);

bool all_finite(const DenseMatrix& a);
bool all_finite(const DenseVector& v);

} // namespace msqrt
