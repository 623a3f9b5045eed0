#pragma once

#include "msqrt/triplet.hpp"

namespace msqrt {

// Triangular factors of A = L*U from elimination driven by the triplet
// (P, u, v). Off-diagonals of both factors are stored as nonnegative
// magnitudes: the signed factors are L = I - l_off and U = diag(u_diag) -
// u_off. Every pivot is assembled as a quotient of sums of nonnegative
// terms, so no digit is lost to cancellation anywhere in the elimination.
struct GthFactors {
    std::size_t n = 0;
    DenseMatrix l_off;   // strictly lower magnitudes
    DenseMatrix u_off;   // strictly upper magnitudes
    DenseVector u_diag;  // positive pivots
};

struct GthStats {
    unsigned long long flops = 0; // adds/multiplies/divides actually executed
};

// Throws gth_structural_zero_pivot when a pivot other than the last one
// vanishes (the matrix then has no valid representation for this u), and
// gth_singular when only the final pivot vanishes.
GthFactors gth_factorize(const TripletRep& t, GthStats* stats = nullptr);
GthFactors gth_factorize(const DenseMatrix& p_off, const DenseVector& u, const DenseVector& v,
                         GthStats* stats = nullptr);

// X = A^{-1} B. When B is entrywise nonnegative the substitutions only add
// nonnegative terms, preserving componentwise accuracy of every entry of X.
DenseMatrix gth_solve_left(const GthFactors& f, const DenseMatrix& b);
DenseVector gth_solve_left(const GthFactors& f, const DenseVector& b);

// X = B A^{-1}; mixes signs in general and is used where that is acceptable.
DenseMatrix gth_solve_right(const GthFactors& f, const DenseMatrix& b);

} // namespace msqrt
