#include "msqrt/sqrt_cr_shifted.hpp"

#include <cmath>
#include <limits>

#include "msqrt/baselines.hpp"
#include "sqrt_detail.hpp"

namespace msqrt {

ShiftSelection select_shift(const DenseMatrix& c, const DenseVector& u, double cap) {
    std::size_t n = c.rows();
    if (c.cols() != n || u.size() != n || n == 0)
        fail(errc::dimension_mismatch, "select_shift: inconsistent dimensions");
    if (!(cap > 0.0 && cap < 1.0))
        fail(errc::bad_option, "select_shift: cap must lie in (0, 1)");

    for (std::size_t j = 0; j < n; ++j) {
        bool positive = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!(c(i, j) > 0.0)) {
                positive = false;
                break;
            }
        if (!positive) continue;
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) g = std::min(g, c(i, j) * u[j] / u[i]);
        ShiftSelection sel;
        sel.column = j;
        sel.sigma = std::min(g, cap);
        sel.w.assign(n, 0.0);
        sel.w[j] = 1.0 / u[j];
        return sel;
    }
    fail(errc::shift_no_column, "select_shift: no strictly positive column in I - A'");
}

namespace {

// Componentwise stop against the subtraction-free diagonal (zeta u + Z_off u)/u.
bool shifted_converged(const DenseMatrix& wmag, const DenseMatrix& zoff, const DenseVector& u,
                       double zeta, double tol) {
    std::size_t n = zoff.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double di = (zeta * u[i] +
                     pairwise_dot_nonneg(zoff.row(i), std::span<const double>(u))) /
                    u[i];
        if (!(wmag(i, i) <= tol * di)) return false;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !(wmag(i, j) <= tol * zoff(i, j))) return false;
    }
    return true;
}

} // namespace

SqrtResult shifted_cr_sqrt(const TripletRep& t, const ShiftedCrOptions& opts) {
    SqrtOptions base;
    base.gamma = opts.gamma;
    base.tol = opts.tol;
    base.max_iter = opts.max_iter;
    detail::validate_opts(base);
    if (!(opts.sigma_cap > 0.0 && opts.sigma_cap < 1.0))
        fail(errc::bad_option, "shifted_cr_sqrt: sigma_cap must lie in (0, 1)");

    if (!is_singular_rep(t))
        fail(errc::shift_requires_singular, "shifted_cr_sqrt: input must have v = 0 exactly");
    if (t.n == 1) return detail::one_by_one(t);
    std::size_t n = t.n;

    detail::ScaledInput si = detail::prepare_scaled(t, opts.gamma);
    DenseMatrix a_scaled = reconstruct(si.ts);
    FrobeniusForm ff = frobenius_form(a_scaled);
    if (ff.block_singular.size() != 1)
        fail(errc::shift_requires_irreducible, "shifted_cr_sqrt: input must be irreducible");

    DenseMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c(i, j) = (i == j) ? 1.0 - si.diag[i] : si.ts.P(i, j);

    ShiftSelection sel;
    if (opts.sigma_override && *opts.sigma_override == 0.0) {
        sel.column = 0;
        sel.sigma = 0.0;
        sel.w.assign(n, 0.0);
    } else {
        sel = select_shift(c, t.u, opts.sigma_cap);
        if (opts.sigma_override) sel.sigma = *opts.sigma_override;
    }
    const double sigma = sel.sigma;
    const std::size_t jc = sel.column;

    // What0 = -(C - sigma u w^T): stored as magnitudes. The subtraction in
    // column jc is protected by the choice of sigma; stray negatives from
    // roundoff at the binding row are clamped to zero.
    DenseMatrix wmag = c;
    DenseMatrix zoff(n, n);
    DenseVector zdiag(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) zoff(i, j) = 2.0 * si.ts.P(i, j);
        zdiag[i] = 2.0 * (1.0 + si.diag[i]);
    }
    if (sigma != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            double q = sigma * t.u[i] / t.u[jc];
            double d = wmag(i, jc) - q;
            wmag(i, jc) = d < 0.0 ? 0.0 : d;
            if (i != jc)
                zoff(i, jc) += q;
            else
                zdiag[i] -= sigma;
        }
    }

    SqrtResult res;
    res.scale = si.s;
    res.sigma = sigma;
    res.shift_column = jc;

    double omega = sigma - 1.0;
    double zeta = 2.0 - sigma;
    res.omega_trace.push_back(omega);
    res.zeta_trace.push_back(zeta);
    res.residual_trace.push_back(inf_norm(wmag));

    detail::StagnationTracker stag;
    SqrtStatus status = SqrtStatus::max_iter;
    std::size_t step = 0;
    DenseVector vvec(n);
    for (;;) {
        if (shifted_converged(wmag, zoff, t.u, zeta, opts.tol)) {
            status = SqrtStatus::converged;
            break;
        }
        if (step >= opts.max_iter) break;

        for (std::size_t i = 0; i < n; ++i) vvec[i] = zeta * t.u[i];
        GthFactors f = gth_factorize(zoff, t.u, vvec);
        DenseMatrix g = gth_solve_left(f, wmag);
        DenseMatrix wn = mat_mul_nonneg(wmag, g);

        double prev = res.residual_trace.back();
        if (!(inf_norm(wn) <= 2.0 * prev)) {
            // With a degenerate shift the deflated matrix drifts toward
            // singularity and the squared defect eventually amplifies noise
            // instead of contracting. Keep the pre-step state if it passes
            // the normwise test.
            double znorm = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = zeta * t.u[i];
                double row = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) {
                        acc += zoff(i, j) * t.u[j];
                        row += zoff(i, j);
                    }
                row += acc / t.u[i];
                if (row > znorm) znorm = row;
            }
            if (prev <= opts.tol * znorm) {
                status = SqrtStatus::converged;
                break;
            }
            fail(errc::no_convergence, "shifted_cr_sqrt: defect stalled above tolerance");
        }

        double omega_next = -(omega * omega) / zeta;
        double zeta_next = zeta + 2.0 * omega_next;
        if (!(zeta_next > 0.0))
            fail(errc::no_convergence, "shifted_cr_sqrt: scalar recursion lost positivity");

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) zoff(i, j) += 2.0 * wn(i, j);
            zdiag[i] -= 2.0 * wn(i, i);
        }
        wmag = std::move(wn);
        omega = omega_next;
        zeta = zeta_next;
        ++step;

        double nrm = inf_norm(wmag);
        stag.push(res.residual_trace.back(), nrm);
        res.residual_trace.push_back(nrm);
        res.omega_trace.push_back(omega);
        res.zeta_trace.push_back(zeta);
    }

    res.iterations = step;
    res.linear_phase = stag.linear;
    res.status = (status == SqrtStatus::converged)
                     ? status
                     : (stag.linear ? SqrtStatus::stagnated_linear : SqrtStatus::max_iter);

    // X = 4 A' Zhat^{-1} sqrt(s). The limit Zhat is nonsingular even though A
    // itself is not; the product restores the null direction exactly because
    // A' u = 0 carries through the right solve.
    for (std::size_t i = 0; i < n; ++i) vvec[i] = zeta * t.u[i];
    GthFactors f = gth_factorize(zoff, t.u, vvec);
    DenseMatrix y = gth_solve_right(f, a_scaled);
    double fac = 4.0 * std::sqrt(si.s);
    res.X = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) res.X(i, j) = y(i, j) * fac;

    TripletRep xt;
    xt.n = n;
    xt.P = DenseMatrix(n, n);
    xt.u = t.u;
    xt.v.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double m = -res.X(i, j);
            xt.P(i, j) = m < 0.0 ? 0.0 : m;
        }
    res.triplet = std::move(xt);
    return res;
}

DeflationEstimate eigen_deflation_check(const DenseMatrix& a_scaled, const DenseVector& u,
                                        double sigma, std::size_t column) {
    std::size_t n = a_scaled.rows();
    if (a_scaled.cols() != n || u.size() != n || column >= n)
        fail(errc::dimension_mismatch, "eigen_deflation_check: inconsistent dimensions");

    DenseMatrix what(n, n), zhat(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double e = a_scaled(i, j);
            what(i, j) = (i == j) ? e - 1.0 : e;
            zhat(i, j) = (i == j) ? 2.0 * (e + 1.0) : 2.0 * e;
            if (j == column) {
                double q = sigma * u[i] / u[column];
                what(i, j) += q;
                zhat(i, j) -= q;
            }
        }

    LuPivFactors f = lu_piv_factorize(zhat);
    DenseMatrix m = lu_piv_apply(f, what);

    DenseVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * double(i + 1);

    DeflationEstimate est;
    double prev = 0.0;
    int stable = 0;
    for (std::size_t it = 1; it <= 500; ++it) {
        DenseVector y = mat_vec(m, x);
        double rho = inf_norm(y);
        est.iterations = it;
        if (rho == 0.0) {
            est.rho = 0.0;
            est.converged = true;
            return est;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / rho;
        if (std::fabs(rho - prev) <= 1e-10 * rho) {
            if (++stable >= 3) {
                est.rho = rho;
                est.converged = true;
                return est;
            }
        } else {
            stable = 0;
        }
        prev = rho;
    }
    est.rho = prev;
    est.converged = false;
    return est;
}

} // namespace msqrt
