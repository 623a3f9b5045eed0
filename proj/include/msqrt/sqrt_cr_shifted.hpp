#pragma once

#include <optional>

#include "msqrt/gth.hpp"
#include "msqrt/sqrt_common.hpp"

namespace msqrt {

struct ShiftSelection {
    std::size_t column = 0; // 0-based column of C = I - A'
    double sigma = 0.0;
    DenseVector w;          // e_column / u_column
};

// Picks the first column of C that is strictly positive everywhere and the
// largest admissible shift for it: sigma = min(min_i c_ij u_j / u_i, cap),
// which keeps C - sigma u w^T entrywise nonnegative. Throws shift_no_column
// when no column qualifies.
ShiftSelection select_shift(const DenseMatrix& c, const DenseVector& u, double cap = 15.0 / 16.0);

struct ShiftedCrOptions {
    double gamma = 4.0;
    double tol = 0x1.0p-53;
    std::size_t max_iter = 120;
    double sigma_cap = 15.0 / 16.0;
    // Testing hook: replaces the selected sigma verbatim. Zero turns the
    // deflation off, which makes the scalar recursion exactly dyadic.
    std::optional<double> sigma_override;
};

// Doubling recursion for a singular irreducible input, with the known null
// direction deflated by a rank-one shift. Requires v = 0 exactly. Converges
// in a handful of steps where the unshifted recursion degrades to linear.
SqrtResult shifted_cr_sqrt(const TripletRep& t, const ShiftedCrOptions& opts = {});

struct DeflationEstimate {
    double rho = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

// Spectral radius of Zhat0^{-1} What0 for the scaled input (diagonal < 1),
// estimated by power iteration from a fixed tilted start vector. Admissible
// shifts keep it strictly below 1/2.
DeflationEstimate eigen_deflation_check(const DenseMatrix& a_scaled, const DenseVector& u,
                                        double sigma, std::size_t column);

} // namespace msqrt
