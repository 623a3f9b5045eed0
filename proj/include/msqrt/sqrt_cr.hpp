#pragma once

#include "msqrt/gth.hpp"
#include "msqrt/sqrt_common.hpp"

namespace msqrt {

// Cyclic reduction state after `step` doubling steps. W is the signed defect
// iterate (entrywise <= 0). Z is never assembled with its diagonal: the
// solves run off the split (Z_off, u, v), where Z_off >= 0 holds the
// off-diagonal magnitudes and Z u = v. Z_diag tracks the diagonal separately
// for norms and diagnostics only; it is not on the solution path.
struct CrState {
    std::size_t n = 0;
    std::size_t step = 0;
    DenseMatrix W;
    DenseMatrix Z_off;
    DenseVector Z_diag;
    DenseVector u, v, p;
    double scale = 1.0;
    // Previous-step Z data, kept so co-running iterations can be compared.
    DenseMatrix Z_off_prev;
    DenseVector v_prev, Z_diag_prev;
};

CrState cr_init(const TripletRep& t, double gamma);
CrState cr_step(const CrState& st);

double cr_w_norm(const CrState& st);
double cr_z_norm(const CrState& st);

// Principal square root via the doubling recursion on the triplet. Result
// includes the triplet of X.
SqrtResult cr_sqrt(const TripletRep& t, const SqrtOptions& opts = {});

// Same recursion run conventionally on the assembled dense matrix with
// partially pivoted LU and sequential sums. Kept as the accuracy baseline;
// produces no triplet.
SqrtResult cr_sqrt_standard(const DenseMatrix& a, const SqrtOptions& opts = {});

} // namespace msqrt
