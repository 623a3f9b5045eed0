#pragma once

#include <optional>
#include <vector>

#include "msqrt/triplet.hpp"

namespace msqrt {

enum class SqrtStatus {
    converged,
    max_iter,          // iteration budget exhausted while still contracting
    stagnated_linear,  // budget exhausted after the contraction turned linear
};

const char* status_name(SqrtStatus s);

struct SqrtOptions {
    double gamma = 4.0;     // s = gamma * max diagonal; must be >= 1
    // Componentwise relative stop: every defect entry must fall to tol
    // relative to the matching entry of the accumulated iterate. A normwise
    // test would quit while badly scaled entries still carry the slow mode.
    // The conventional baseline keeps the normwise test.
    double tol = 0x1.0p-53;
    std::size_t max_iter = 120;
};

struct SqrtResult {
    DenseMatrix X;
    // Triplet of X when the method certifies one (the conventional baseline
    // does not).
    std::optional<TripletRep> triplet;
    std::vector<double> residual_trace; // entry 0 is the initial defect norm
    std::size_t iterations = 0;
    SqrtStatus status = SqrtStatus::converged;
    bool linear_phase = false; // ratio sat in [0.4, 0.6] for 8 straight steps
    double scale = 1.0;

    // Shifted variant only.
    std::vector<double> omega_trace, zeta_trace;
    double sigma = 0.0;
    std::size_t shift_column = 0;
};

} // namespace msqrt
