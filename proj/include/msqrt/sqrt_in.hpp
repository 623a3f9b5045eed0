#pragma once

#include "msqrt/gth.hpp"
#include "msqrt/sqrt_common.hpp"
#include "msqrt/sqrt_cr.hpp"

namespace msqrt {

// Newton increment state after `step` updates. X is kept split as
// (X_off >= 0, u, v) so the inner solves run off nonnegative data; F is the
// signed increment: F_0 = (I - A')/2 is entrywise >= 0, every later F is
// entrywise <= 0, and the recursion only ever needs its magnitudes.
struct InState {
    std::size_t n = 0;
    std::size_t step = 0;
    DenseMatrix X_off;
    DenseMatrix F;
    DenseVector u, v, p, g;
    double scale = 1.0;
    TripletRep base;   // scaled input triplet, used once by the second step
    DenseMatrix F_prev;
};

InState in_init(const TripletRep& t, double gamma);
InState in_step(const InState& st);

double in_f_norm(const InState& st);
double in_x_norm(const InState& st);

// Principal square root by accumulating Newton increments on the triplet.
SqrtResult in_sqrt(const TripletRep& t, const SqrtOptions& opts = {});

// Largest componentwise deviation between co-running states at the same
// step l >= 1: compares 4 X_l against the previous-step Z_{l-1} and 2 F_l
// against W_l. Deviations are relative where the reference entry is nonzero.
double in_state_crosscheck(const InState& in, const CrState& cr);

} // namespace msqrt
