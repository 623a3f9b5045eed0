#pragma once

#include <algorithm>
#include <cmath>

#include "msqrt/sqrt_common.hpp"

namespace msqrt::detail {

inline void validate_opts(const SqrtOptions& opts) {
    if (!(opts.gamma >= 1.0) || !std::isfinite(opts.gamma))
        fail(errc::bad_option, "gamma must be >= 1");
    if (!(opts.tol > 0.0)) fail(errc::bad_option, "tol must be positive");
    if (opts.max_iter == 0) fail(errc::bad_option, "max_iter must be positive");
}

struct ScaledInput {
    TripletRep ts;     // input scaled by s
    DenseVector diag;  // implied diagonal of the scaled input, <= 1/gamma
    double s = 1.0;
};

inline ScaledInput prepare_scaled(const TripletRep& t, double gamma) {
    DenseVector d = implied_diag(t);
    double dmax = 0.0;
    for (double x : d) dmax = std::max(dmax, x);
    if (dmax == 0.0)
        fail(errc::zero_matrix, "matrix has an all-zero diagonal; nothing to scale by");
    ScaledInput si;
    si.s = gamma * dmax;
    si.ts = scale(t, si.s);
    si.diag = implied_diag(si.ts);
    return si;
}

// Contraction-rate watcher: eight consecutive step ratios inside [0.4, 0.6]
// mean the quadratic phase has degraded to a linear one.
struct StagnationTracker {
    int run = 0;
    bool linear = false;
    void push(double prev, double cur) {
        if (prev > 0.0 && cur / prev >= 0.4 && cur / prev <= 0.6) {
            if (++run >= 8) linear = true;
        } else {
            run = 0;
        }
    }
};

// Closed form for 1x1 input: X = [sqrt(a)], with a read off the triplet.
inline SqrtResult one_by_one(const TripletRep& t) {
    double a = (t.v[0] + 0.0) / t.u[0];
    double x = std::sqrt(a);
    SqrtResult res;
    res.X = DenseMatrix(1, 1);
    res.X(0, 0) = x;
    TripletRep xt;
    xt.n = 1;
    xt.P = DenseMatrix(1, 1);
    xt.u = t.u;
    xt.v = {x * t.u[0]};
    res.triplet = std::move(xt);
    res.residual_trace = {0.0};
    res.status = SqrtStatus::converged;
    return res;
}

} // namespace msqrt::detail
