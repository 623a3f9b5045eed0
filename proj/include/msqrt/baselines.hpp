#pragma once

#include <vector>

#include "msqrt/dense.hpp"

namespace msqrt {

// Conventional Gaussian elimination with partial pivoting, kept around as the
// comparison baseline. Accumulation is sequential on purpose; the pairwise
// tree is reserved for the cancellation-free paths.
struct LuPivFactors {
    DenseMatrix lu;  // unit L strictly below the diagonal, U on and above
    std::vector<std::size_t> perm;
    bool singular = false;  // hit an exactly zero pivot column
};

LuPivFactors lu_piv_factorize(DenseMatrix a);

// Solve with precomputed factors; rejects factors flagged singular.
DenseMatrix lu_piv_apply(const LuPivFactors& f, const DenseMatrix& b);

DenseMatrix lu_piv_solve(const DenseMatrix& a, const DenseMatrix& b);
DenseVector lu_piv_solve(const DenseMatrix& a, const DenseVector& b);

// Sequential-accumulation product and norm used by the baseline solvers.
DenseMatrix mat_mul_seq(const DenseMatrix& a, const DenseMatrix& b);
double inf_norm_seq(const DenseMatrix& a);

} // namespace msqrt
