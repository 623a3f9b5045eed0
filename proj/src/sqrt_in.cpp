#include "msqrt/sqrt_in.hpp"

#include <cmath>
#include <utility>

#include "sqrt_detail.hpp"

namespace msqrt {

InState in_init(const TripletRep& t, double gamma) {
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) fail(errc::bad_option, "in_init: gamma must be >= 1");
    detail::ScaledInput si = detail::prepare_scaled(t, gamma);
    std::size_t n = t.n;

    InState st;
    st.n = n;
    st.scale = si.s;
    st.u = t.u;
    st.X_off = si.ts.P;
    st.v = si.ts.v;
    st.F = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) st.F(i, j) = si.ts.P(i, j) * 0.5;
        // diag(A') <= 1/gamma up to roundoff; clamp like the doubling variant.
        double fd = (1.0 - si.diag[i]) * 0.5;
        st.F(i, i) = fd < 0.0 ? 0.0 : fd;
    }
    st.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) st.p[i] = 4.0 * si.ts.v[i];
    st.base = std::move(si.ts);
    return st;
}

InState in_step(const InState& st) {
    std::size_t n = st.n;
    std::size_t l = st.step;

    DenseMatrix fmag(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) fmag(i, j) = std::fabs(st.F(i, j));

    InState nx;
    nx.n = n;
    nx.step = l + 1;
    nx.scale = st.scale;
    nx.u = st.u;
    nx.base = st.base;
    nx.F_prev = st.F;

    nx.X_off = DenseMatrix(n, n);
    if (l == 0) {
        // X_1 = (I + A')/2: halving the off-diagonal is exact.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) nx.X_off(i, j) = st.X_off(i, j) * 0.5;
        nx.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) nx.v[i] = 0.5 * (st.u[i] + st.base.v[i]);
        nx.p = st.p;
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) nx.X_off(i, j) = st.X_off(i, j) + fmag(i, j);
        if (l == 1) {
            // p_2 = 8 (I + A')^{-1} v', read off the triplet (P', u, u + v').
            DenseVector w(n);
            for (std::size_t i = 0; i < n; ++i) w[i] = st.u[i] + st.base.v[i];
            GthFactors fb = gth_factorize(st.base.P, st.u, w);
            DenseVector y = gth_solve_left(fb, st.base.v);
            nx.p.resize(n);
            for (std::size_t i = 0; i < n; ++i) nx.p[i] = 8.0 * y[i];
        } else {
            DenseMatrix fprev_mag(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) fprev_mag(i, j) = std::fabs(st.F_prev(i, j));
            DenseVector fg = mat_vec_nonneg(fprev_mag, st.g);
            nx.p.resize(n);
            for (std::size_t i = 0; i < n; ++i) nx.p[i] = st.p[i] + fg[i];
        }
        DenseVector fu = mat_vec_nonneg(fmag, st.u);
        nx.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) nx.v[i] = 0.25 * (nx.p[i] + 4.0 * fu[i]);
    }

    GthFactors f = gth_factorize(nx.X_off, nx.u, nx.v);
    DenseMatrix g = gth_solve_left(f, fmag);
    if (l >= 1) nx.g = gth_solve_left(f, nx.p);

    DenseMatrix fnext = mat_mul_nonneg(fmag, g);
    nx.F = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) nx.F(i, j) = -0.5 * fnext(i, j);
    return nx;
}

double in_f_norm(const InState& st) { return inf_norm(st.F); }

namespace {

// Componentwise stop: |F(i,j)| <= tol * X(i,j) entry by entry, diagonal read
// off the subtraction-free route.
bool in_converged(const InState& st, double tol) {
    for (std::size_t i = 0; i < st.n; ++i) {
        double di = (st.v[i] +
                     pairwise_dot_nonneg(st.X_off.row(i), std::span<const double>(st.u))) /
                    st.u[i];
        if (!(std::fabs(st.F(i, i)) <= tol * di)) return false;
        for (std::size_t j = 0; j < st.n; ++j)
            if (i != j && !(std::fabs(st.F(i, j)) <= tol * st.X_off(i, j))) return false;
    }
    return true;
}

} // namespace

double in_x_norm(const InState& st) {
    double best = 0.0;
    for (std::size_t i = 0; i < st.n; ++i) {
        double d = (st.v[i] +
                    pairwise_dot_nonneg(st.X_off.row(i), std::span<const double>(st.u))) /
                   st.u[i];
        double s = d + pairwise_sum_nonneg(st.X_off.row(i));
        if (s > best) best = s;
    }
    return best;
}

SqrtResult in_sqrt(const TripletRep& t, const SqrtOptions& opts) {
    detail::validate_opts(opts);
    if (t.n == 1) return detail::one_by_one(t);
    std::size_t n = t.n;

    SqrtResult res;
    InState st = in_init(t, opts.gamma);
    res.scale = st.scale;
    res.residual_trace.push_back(in_f_norm(st));

    detail::StagnationTracker stag;
    SqrtStatus status = SqrtStatus::max_iter;
    for (;;) {
        if (in_converged(st, opts.tol)) {
            status = SqrtStatus::converged;
            break;
        }
        if (st.step >= opts.max_iter) break;
        InState nx = in_step(st);
        double fn = in_f_norm(nx);
        double prev = res.residual_trace.back();
        if (!(fn <= 2.0 * prev)) {
            // Correction norms are non-increasing in exact arithmetic; a
            // doubling means the attainable floor is hit. Keep the pre-step
            // state if it passes the normwise test.
            if (prev <= opts.tol * in_x_norm(st)) {
                status = SqrtStatus::converged;
                break;
            }
            fail(errc::no_convergence, "in_sqrt: defect stalled above tolerance");
        }
        st = std::move(nx);
        stag.push(prev, fn);
        res.residual_trace.push_back(fn);
    }

    res.iterations = st.step;
    res.linear_phase = stag.linear;
    res.status = (status == SqrtStatus::converged)
                     ? status
                     : (stag.linear ? SqrtStatus::stagnated_linear : SqrtStatus::max_iter);

    double fac = std::sqrt(st.scale);
    res.X = DenseMatrix(n, n);
    TripletRep xt;
    xt.n = n;
    xt.P = DenseMatrix(n, n);
    xt.u = st.u;
    xt.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = (st.v[i] +
                    pairwise_dot_nonneg(st.X_off.row(i), std::span<const double>(st.u))) /
                   st.u[i];
        res.X(i, i) = d * fac;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double m = st.X_off(i, j) * fac;
            res.X(i, j) = -m;
            xt.P(i, j) = m;
        }
        xt.v[i] = st.v[i] * fac;
    }
    res.triplet = std::move(xt);
    return res;
}

double in_state_crosscheck(const InState& in, const CrState& cr) {
    if (in.n != cr.n) fail(errc::dimension_mismatch, "in_state_crosscheck: sizes disagree");
    if (in.step != cr.step)
        fail(errc::step_mismatch, "in_state_crosscheck: states sit at different steps");
    if (in.step < 1)
        fail(errc::step_mismatch, "in_state_crosscheck: states must be advanced at least one step");
    std::size_t n = in.n;

    auto rel = [](double a, double b) { return b != 0.0 ? std::fabs(a - b) / std::fabs(b) : std::fabs(a); };

    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double din = (in.v[i] +
                      pairwise_dot(in.X_off.row(i), std::span<const double>(in.u))) /
                     in.u[i];
        double dz = (cr.v_prev[i] +
                     pairwise_dot(cr.Z_off_prev.row(i), std::span<const double>(cr.u))) /
                    cr.u[i];
        dev = std::max(dev, rel(4.0 * din, dz));
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) dev = std::max(dev, rel(4.0 * in.X_off(i, j), cr.Z_off_prev(i, j)));
            dev = std::max(dev, rel(2.0 * in.F(i, j), cr.W(i, j)));
        }
    }
    return dev;
}

} // namespace msqrt
