#pragma once

#include <vector>

#include "msqrt/dense.hpp"

namespace msqrt {

// Triplet representation (P, u, v) of an M-matrix A:
//   P = -offdiag(A) >= 0,  u > 0,  v = A*u >= 0.
// The diagonal is implied, a_ii = (v_i + (P*u)_i) / u_i, so it can always be
// recovered without subtracting.
struct TripletRep {
    std::size_t n = 0;
    DenseMatrix P;  // n x n, zero diagonal, nonnegative
    DenseVector u;  // strictly positive
    DenseVector v;  // nonnegative
};

// Extract (P, u, A*u) from a full matrix. Positive off-diagonal entries are
// rejected; (A*u)_i may round slightly negative, which is clamped to zero if
// it stays within n*ceil(log2 n)*eps of the row magnitude |a_i|*u, and
// rejected otherwise.
TripletRep from_full(const DenseMatrix& a, const DenseVector& u);

DenseMatrix reconstruct(const TripletRep& t);

// Implied diagonal of reconstruct(t), computed without subtractions.
DenseVector implied_diag(const TripletRep& t);

// Triplet of A/s: (P/s, u, v/s). s must be > 0.
TripletRep scale(const TripletRep& t, double s);

// Checks structural invariants and row consistency of the representation.
void validate(const TripletRep& t);

// True when v is exactly zero, i.e. the represented matrix is singular with
// A*u = 0 built into the data.
bool is_singular_rep(const TripletRep& t);

// Frobenius normal form: strongly connected components of the off-diagonal
// graph, ordered so that P^T A P is block upper triangular.
struct FrobeniusForm {
    std::vector<std::size_t> perm;              // position -> original index
    std::vector<std::size_t> block_boundaries;  // num_blocks+1 offsets, 0 .. n
    std::vector<bool> block_singular;
};

FrobeniusForm frobenius_form(const DenseMatrix& a);

// Existence test: every singular diagonal block of the Frobenius form must
// have zero off-diagonal blocks in its row. Input must be a Z-matrix.
bool has_triplet(const DenseMatrix& a);

} // namespace msqrt
