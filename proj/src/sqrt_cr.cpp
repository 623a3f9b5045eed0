#include "msqrt/sqrt_cr.hpp"

#include <cmath>
#include <utility>

#include "msqrt/baselines.hpp"
#include "sqrt_detail.hpp"

namespace msqrt {

const char* status_name(SqrtStatus s) {
    switch (s) {
        case SqrtStatus::converged: return "converged";
        case SqrtStatus::max_iter: return "max_iter";
        case SqrtStatus::stagnated_linear: return "stagnated_linear";
    }
    return "unknown";
}

CrState cr_init(const TripletRep& t, double gamma) {
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) fail(errc::bad_option, "cr_init: gamma must be >= 1");
    detail::ScaledInput si = detail::prepare_scaled(t, gamma);
    std::size_t n = t.n;

    CrState st;
    st.n = n;
    st.scale = si.s;
    st.u = t.u;
    st.W = DenseMatrix(n, n);
    st.Z_off = DenseMatrix(n, n);
    st.Z_diag.resize(n);
    st.v.resize(n);
    st.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            st.W(i, j) = -si.ts.P(i, j);
            st.Z_off(i, j) = 2.0 * si.ts.P(i, j);
        }
        // diag(A') <= 1/gamma; with gamma == 1 roundoff can push the largest
        // entry a hair above 1, so clamp the defect diagonal at zero.
        double wd = si.diag[i] - 1.0;
        st.W(i, i) = wd > 0.0 ? 0.0 : wd;
        st.Z_diag[i] = 2.0 * (1.0 + si.diag[i]);
        st.v[i] = 2.0 * (t.u[i] + si.ts.v[i]);
        st.p[i] = 4.0 * si.ts.v[i];
    }
    st.Z_off_prev = st.Z_off;
    st.v_prev = st.v;
    st.Z_diag_prev = st.Z_diag;
    return st;
}

CrState cr_step(const CrState& st) {
    std::size_t n = st.n;
    GthFactors f = gth_factorize(st.Z_off, st.u, st.v);

    DenseMatrix wmag(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) wmag(i, j) = -st.W(i, j);

    DenseMatrix g = gth_solve_left(f, wmag);
    DenseVector tcol = gth_solve_left(f, st.p);
    DenseMatrix wnext = mat_mul_nonneg(wmag, g);
    DenseVector mv = mat_vec_nonneg(wmag, tcol);

    CrState nx;
    nx.n = n;
    nx.step = st.step + 1;
    nx.scale = st.scale;
    nx.u = st.u;
    nx.Z_off_prev = st.Z_off;
    nx.v_prev = st.v;
    nx.Z_diag_prev = st.Z_diag;

    nx.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) nx.p[i] = st.p[i] + 2.0 * mv[i];

    nx.Z_off = st.Z_off;
    nx.Z_diag = st.Z_diag;
    nx.W = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            nx.W(i, j) = -wnext(i, j);
            if (i != j) nx.Z_off(i, j) += 2.0 * wnext(i, j);
        }
        nx.Z_diag[i] -= 2.0 * wnext(i, i);
    }

    DenseVector wu = mat_vec_nonneg(wnext, st.u);
    nx.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) nx.v[i] = nx.p[i] + 2.0 * wu[i];
    return nx;
}

double cr_w_norm(const CrState& st) { return inf_norm(st.W); }

namespace {

// Componentwise stop: |W(i,j)| <= tol * Z(i,j) entry by entry, with the
// diagonal of Z read off the subtraction-free route (v + Z_off u) / u. Any
// defect entry whose Z counterpart is still zero keeps the iteration going.
bool cr_converged(const CrState& st, double tol) {
    for (std::size_t i = 0; i < st.n; ++i) {
        double di = (st.v[i] +
                     pairwise_dot_nonneg(st.Z_off.row(i), std::span<const double>(st.u))) /
                    st.u[i];
        if (!(-st.W(i, i) <= tol * di)) return false;
        for (std::size_t j = 0; j < st.n; ++j)
            if (i != j && !(-st.W(i, j) <= tol * st.Z_off(i, j))) return false;
    }
    return true;
}

} // namespace

double cr_z_norm(const CrState& st) {
    double best = 0.0;
    for (std::size_t i = 0; i < st.n; ++i) {
        double s = st.Z_diag[i] + pairwise_sum_nonneg(st.Z_off.row(i));
        if (s > best) best = s;
    }
    return best;
}

namespace {

void cr_finalize(const CrState& st, SqrtResult& res) {
    std::size_t n = st.n;
    double fac = std::sqrt(st.scale) / 4.0;
    res.X = DenseMatrix(n, n);
    TripletRep xt;
    xt.n = n;
    xt.P = DenseMatrix(n, n);
    xt.u = st.u;
    xt.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double di = (st.v[i] + pairwise_dot_nonneg(st.Z_off.row(i), std::span<const double>(st.u))) /
                    st.u[i];
        res.X(i, i) = di * fac;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double m = st.Z_off(i, j) * fac;
            res.X(i, j) = -m;
            xt.P(i, j) = m;
        }
        xt.v[i] = st.v[i] * fac;
    }
    res.triplet = std::move(xt);
}

} // namespace

SqrtResult cr_sqrt(const TripletRep& t, const SqrtOptions& opts) {
    detail::validate_opts(opts);
    if (t.n == 1) return detail::one_by_one(t);

    SqrtResult res;
    CrState st = cr_init(t, opts.gamma);
    res.scale = st.scale;
    res.residual_trace.push_back(cr_w_norm(st));

    detail::StagnationTracker stag;
    SqrtStatus status = SqrtStatus::max_iter;
    for (;;) {
        if (cr_converged(st, opts.tol)) {
            status = SqrtStatus::converged;
            break;
        }
        if (st.step >= opts.max_iter) break;
        CrState nx = cr_step(st);
        double wn = cr_w_norm(nx);
        double prev = res.residual_trace.back();
        if (!(wn <= 2.0 * prev)) {
            // The defect never grows in exact arithmetic; a doubling means
            // the attainable floor is hit and further steps would amplify
            // noise. Keep the pre-step state if it passes the normwise test.
            if (prev <= opts.tol * cr_z_norm(st)) {
                status = SqrtStatus::converged;
                break;
            }
            fail(errc::no_convergence, "cr_sqrt: defect stalled above tolerance");
        }
        st = std::move(nx);
        stag.push(prev, wn);
        res.residual_trace.push_back(wn);
    }

    res.iterations = st.step;
    res.linear_phase = stag.linear;
    res.status = (status == SqrtStatus::converged)
                     ? status
                     : (stag.linear ? SqrtStatus::stagnated_linear : SqrtStatus::max_iter);
    cr_finalize(st, res);
    return res;
}

SqrtResult cr_sqrt_standard(const DenseMatrix& a, const SqrtOptions& opts) {
    detail::validate_opts(opts);
    if (a.rows() != a.cols() || a.rows() == 0)
        fail(errc::dimension_mismatch, "cr_sqrt_standard: matrix must be square and nonempty");
    std::size_t n = a.rows();

    if (n == 1) {
        if (a(0, 0) < 0.0) fail(errc::not_z_matrix, "cr_sqrt_standard: negative 1x1 entry");
        SqrtResult res;
        res.X = DenseMatrix(1, 1);
        res.X(0, 0) = std::sqrt(a(0, 0));
        res.residual_trace = {0.0};
        return res;
    }

    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, a(i, i));
    if (dmax <= 0.0)
        fail(errc::zero_matrix, "cr_sqrt_standard: needs a positive diagonal entry to scale by");
    double s = opts.gamma * dmax;

    DenseMatrix w(n, n), z(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double e = a(i, j) / s;
            w(i, j) = (i == j) ? e - 1.0 : e;
            z(i, j) = (i == j) ? 2.0 * (e + 1.0) : 2.0 * e;
        }

    SqrtResult res;
    res.scale = s;
    res.residual_trace.push_back(inf_norm_seq(w));
    detail::StagnationTracker stag;
    SqrtStatus status = SqrtStatus::max_iter;
    std::size_t iter = 0;
    for (;;) {
        if (res.residual_trace.back() <= opts.tol * inf_norm_seq(z)) {
            status = SqrtStatus::converged;
            break;
        }
        if (iter >= opts.max_iter) break;
        LuPivFactors f = lu_piv_factorize(z);
        DenseMatrix g = lu_piv_apply(f, w);
        DenseMatrix wg = mat_mul_seq(w, g);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double wn = -wg(i, j);
                w(i, j) = wn;
                z(i, j) += 2.0 * wn;
            }
        ++iter;
        double nrm = inf_norm_seq(w);
        stag.push(res.residual_trace.back(), nrm);
        res.residual_trace.push_back(nrm);
    }

    res.iterations = iter;
    res.linear_phase = stag.linear;
    res.status = (status == SqrtStatus::converged)
                     ? status
                     : (stag.linear ? SqrtStatus::stagnated_linear : SqrtStatus::max_iter);
    double fac = std::sqrt(s) / 4.0;
    res.X = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) res.X(i, j) = z(i, j) * fac;
    return res;
}

} // namespace msqrt
