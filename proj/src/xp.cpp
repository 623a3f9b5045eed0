#include "msqrt/xp.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace msqrt::xp {

namespace {

struct Pair {
    double s, e;
};

// s+e := a+b, exactly (Knuth, branch-free).
inline Pair two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

// Requires |a| >= |b| or a == 0.
inline Pair quick_two_sum(double a, double b) {
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

// s+e := a*b, exactly.
inline Pair two_prod(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

inline XpScalar norm2(double h, double l) {
    Pair p = quick_two_sum(h, l);
    return {p.s, p.e};
}

// a * f for plain double f.
inline XpScalar mul_fp(XpScalar a, double f) {
    Pair p = two_prod(a.hi, f);
    double e = std::fma(a.lo, f, p.e);
    return norm2(p.s, e);
}

} // namespace

XpScalar xp_add(XpScalar a, XpScalar b) {
    Pair s = two_sum(a.hi, b.hi);
    Pair t = two_sum(a.lo, b.lo);
    double c = s.e + t.s;
    Pair v = quick_two_sum(s.s, c);
    double w = t.e + v.e;
    return norm2(v.s, w);
}

XpScalar xp_sub(XpScalar a, XpScalar b) { return xp_add(a, xp_neg(b)); }

XpScalar xp_mul(XpScalar a, XpScalar b) {
    Pair p = two_prod(a.hi, b.hi);
    double t = a.lo * b.lo;
    t = std::fma(a.hi, b.lo, t);
    t = std::fma(a.lo, b.hi, t);
    return norm2(p.s, p.e + t);
}

XpScalar xp_div(XpScalar a, XpScalar b) {
    if (b.hi == 0.0)
        fail(errc::zero_divisor, "xp_div: zero divisor");
    // Long division with two corrections, each residual formed exactly.
    double q1 = a.hi / b.hi;
    XpScalar r = xp_sub(a, mul_fp(b, q1));
    double q2 = r.hi / b.hi;
    r = xp_sub(r, mul_fp(b, q2));
    double q3 = r.hi / b.hi;
    Pair s = two_sum(q1, q2);
    return norm2(s.s, s.e + q3);
}

XpScalar xp_sqrt(XpScalar a) {
    if (a.hi == 0.0 && a.lo == 0.0) return {};
    if (a.hi < 0.0)
        throw std::domain_error("xp_sqrt: negative operand");
    // One Newton correction on the double estimate recovers full width.
    double r = std::sqrt(a.hi);
    XpScalar rr(r);
    XpScalar e = xp_sub(a, xp_mul(rr, rr));
    double corr = e.hi / (2.0 * r);
    return norm2(r, corr);
}

XpScalar xp_neg(XpScalar a) { return {-a.hi, -a.lo}; }

XpScalar xp_abs(XpScalar a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? xp_neg(a) : a; }

bool xp_less(XpScalar a, XpScalar b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}

XpScalar xp_from_decimal(const char* s) {
    XpScalar acc;
    XpScalar ten(10.0);
    bool negative = false;
    int frac_digits = 0;
    bool seen_point = false;
    const char* p = s;
    if (*p == '+' || *p == '-') {
        negative = (*p == '-');
        ++p;
    }
    for (; *p; ++p) {
        if (*p == '.') {
            if (seen_point)
                fail(errc::parse_error, "xp_from_decimal: repeated point");
            seen_point = true;
            continue;
        }
        if (*p < '0' || *p > '9')
            fail(errc::parse_error, std::string("xp_from_decimal: bad character '") + *p + "'");
        acc = xp_add(xp_mul(acc, ten), XpScalar(double(*p - '0')));
        if (seen_point) ++frac_digits;
    }
    XpScalar descale(1.0);
    for (int i = 0; i < frac_digits; ++i) descale = xp_mul(descale, ten);
    XpScalar r = frac_digits ? xp_div(acc, descale) : acc;
    return negative ? xp_neg(r) : r;
}

XpMatrix XpMatrix::identity(std::size_t n) {
    XpMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = XpScalar(1.0);
    return m;
}

XpMatrix xp_from(const DenseMatrix& m) {
    XpMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = XpScalar(m(i, j));
    return r;
}

DenseMatrix xp_round(const XpMatrix& m) {
    DenseMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            r(i, j) = to_double(m(i, j));
    return r;
}

XpMatrix xp_mat_mul(const XpMatrix& a, const XpMatrix& b) {
    if (a.cols != b.rows)
        fail(errc::dimension_mismatch, "xp_mat_mul: inner dimensions disagree");
    XpMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            XpScalar aik = a(i, k);
            if (xp_zero(aik)) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c(i, j) = xp_add(c(i, j), xp_mul(aik, b(k, j)));
        }
    return c;
}

XpScalar xp_inf_norm(const XpMatrix& m) {
    XpScalar best;
    for (std::size_t i = 0; i < m.rows; ++i) {
        XpScalar s;
        for (std::size_t j = 0; j < m.cols; ++j) s = xp_add(s, xp_abs(m(i, j)));
        if (xp_less(best, s)) best = s;
    }
    return best;
}

namespace {

struct XpLu {
    XpMatrix lu;
    std::vector<std::size_t> perm;
};

XpLu xp_lu_factor(XpMatrix a) {
    std::size_t n = a.rows;
    XpLu f;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        XpScalar best = xp_abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            XpScalar cand = xp_abs(a(i, k));
            if (xp_less(best, cand)) {
                best = cand;
                piv = i;
            }
        }
        if (xp_zero(best))
            fail(errc::lu_singular, "xp_lu_factor: zero pivot column");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            XpScalar l = xp_div(a(i, k), a(k, k));
            a(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = xp_sub(a(i, j), xp_mul(l, a(k, j)));
        }
    }
    f.lu = std::move(a);
    return f;
}

XpMatrix xp_lu_solve(const XpLu& f, const XpMatrix& b) {
    std::size_t n = f.lu.rows;
    XpMatrix x(n, b.cols);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) x(i, j) = b(f.perm[i], j);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) {
            XpScalar l = f.lu(i, k);
            if (xp_zero(l)) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                x(i, j) = xp_sub(x(i, j), xp_mul(l, x(k, j)));
        }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
            XpScalar uk = f.lu(ii, k);
            if (xp_zero(uk)) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                x(ii, j) = xp_sub(x(ii, j), xp_mul(uk, x(k, j)));
        }
        for (std::size_t j = 0; j < b.cols; ++j)
            x(ii, j) = xp_div(x(ii, j), f.lu(ii, ii));
    }
    return x;
}

XpScalar xp_max_diag(const XpMatrix& a) {
    XpScalar best = a(0, 0);
    for (std::size_t i = 1; i < a.rows; ++i)
        if (xp_less(best, a(i, i))) best = a(i, i);
    return best;
}

std::size_t budget(bool singular_hint) { return singular_hint ? xp_ref_max_iter : 80; }

// Dense cyclic reduction: W <- -W Z^-1 W, Z <- Z + 2W, limit Z -> 4 A^(1/2).
XpMatrix xp_cr_dense(const XpMatrix& a0, bool singular_hint) {
    std::size_t n = a0.rows;
    XpScalar s = xp_mul(XpScalar(4.0), xp_max_diag(a0));
    if (xp_zero(s) || s.hi < 0.0)
        fail(errc::zero_matrix, "xp_sqrtm_reference: nonpositive diagonal scale");
    XpMatrix a(n, n);
    for (std::size_t i = 0; i < n * n; ++i) a.a[i] = xp_div(a0.a[i], s);

    XpMatrix w = a, z = a;
    for (std::size_t i = 0; i < n; ++i) {
        w(i, i) = xp_sub(w(i, i), XpScalar(1.0));
        z(i, i) = xp_add(z(i, i), XpScalar(1.0));
    }
    for (std::size_t i = 0; i < n * n; ++i) z.a[i] = xp_mul(z.a[i], XpScalar(2.0));

    XpScalar tol(xp_ref_tol);
    bool done = false;
    for (std::size_t it = 0; it < budget(singular_hint); ++it) {
        if (xp_less(xp_inf_norm(w), xp_mul(tol, xp_inf_norm(z)))) {
            done = true;
            break;
        }
        XpLu f = xp_lu_factor(z);
        XpMatrix g = xp_lu_solve(f, w);
        XpMatrix wn = xp_mat_mul(w, g);
        for (std::size_t i = 0; i < n * n; ++i) {
            wn.a[i] = xp_neg(wn.a[i]);
            z.a[i] = xp_add(z.a[i], xp_mul(XpScalar(2.0), wn.a[i]));
        }
        w = std::move(wn);
    }
    if (!done)
        fail(errc::no_convergence, "xp_sqrtm_reference: tolerance not reached");

    XpScalar scale = xp_div(xp_sqrt(s), XpScalar(4.0));
    for (std::size_t i = 0; i < n * n; ++i) z.a[i] = xp_mul(z.a[i], scale);
    return z;
}

// Dense incremental Newton: X <- X + F, F <- -1/2 F X^-1 F, limit X -> A^(1/2).
XpMatrix xp_in_dense(const XpMatrix& a0, bool singular_hint) {
    std::size_t n = a0.rows;
    XpScalar s = xp_mul(XpScalar(4.0), xp_max_diag(a0));
    if (xp_zero(s) || s.hi < 0.0)
        fail(errc::zero_matrix, "xp_sqrtm_reference: nonpositive diagonal scale");
    XpMatrix x(n, n);
    for (std::size_t i = 0; i < n * n; ++i) x.a[i] = xp_div(a0.a[i], s);

    XpMatrix f(n, n);
    XpScalar half(0.5);
    for (std::size_t i = 0; i < n * n; ++i) f.a[i] = xp_mul(xp_neg(x.a[i]), half);
    for (std::size_t i = 0; i < n; ++i) f(i, i) = xp_add(f(i, i), half);

    XpScalar tol(xp_ref_tol);
    bool done = false;
    for (std::size_t it = 0; it < budget(singular_hint); ++it) {
        if (xp_less(xp_inf_norm(f), xp_mul(tol, xp_inf_norm(x)))) {
            done = true;
            break;
        }
        for (std::size_t i = 0; i < n * n; ++i) x.a[i] = xp_add(x.a[i], f.a[i]);
        XpLu lu = xp_lu_factor(x);
        XpMatrix g = xp_lu_solve(lu, f);
        XpMatrix fn = xp_mat_mul(f, g);
        for (std::size_t i = 0; i < n * n; ++i) fn.a[i] = xp_mul(xp_neg(fn.a[i]), half);
        f = std::move(fn);
    }
    if (!done)
        fail(errc::no_convergence, "xp_sqrtm_reference: tolerance not reached");

    XpScalar scale = xp_sqrt(s);
    for (std::size_t i = 0; i < n * n; ++i) x.a[i] = xp_mul(x.a[i], scale);
    return x;
}

// GTH elimination of the triplet (Zoff, u, w): Z = diag implied - offdiag,
// all pivots formed as nonnegative sums. Factor overwrites m with L below the
// diagonal and U magnitudes above it.
struct XpGth {
    XpMatrix m;
    std::vector<XpScalar> d;
};

XpGth xp_gth_factor(const XpMatrix& zoff, const std::vector<XpScalar>& u,
                    std::vector<XpScalar> w) {
    std::size_t n = zoff.rows;
    XpGth f;
    f.m = zoff;
    f.d.resize(n);
    for (std::size_t l = 0; l + 1 < n; ++l) {
        XpScalar num = w[l];
        for (std::size_t k = l + 1; k < n; ++k)
            num = xp_add(num, xp_mul(f.m(l, k), u[k]));
        if (xp_zero(num))
            fail(errc::gth_singular, "xp_gth_factor: zero pivot");
        f.d[l] = xp_div(num, u[l]);
        for (std::size_t i = l + 1; i < n; ++i) {
            XpScalar lif = xp_div(f.m(i, l), f.d[l]);
            f.m(i, l) = lif;
            if (xp_zero(lif)) continue;
            w[i] = xp_add(w[i], xp_mul(lif, w[l]));
            for (std::size_t j = l + 1; j < n; ++j)
                if (j != i) f.m(i, j) = xp_add(f.m(i, j), xp_mul(lif, f.m(l, j)));
        }
    }
    if (xp_zero(w[n - 1]))
        fail(errc::gth_singular, "xp_gth_factor: singular matrix");
    f.d[n - 1] = xp_div(w[n - 1], u[n - 1]);
    return f;
}

XpMatrix xp_gth_solve(const XpGth& f, const XpMatrix& b) {
    std::size_t n = f.m.rows;
    XpMatrix x = b;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) {
            XpScalar l = f.m(i, k);
            if (xp_zero(l)) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                x(i, j) = xp_add(x(i, j), xp_mul(l, x(k, j)));
        }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
            XpScalar uk = f.m(ii, k);
            if (xp_zero(uk)) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                x(ii, j) = xp_add(x(ii, j), xp_mul(uk, x(k, j)));
        }
        for (std::size_t j = 0; j < b.cols; ++j)
            x(ii, j) = xp_div(x(ii, j), f.d[ii]);
    }
    return x;
}

// Triplet cyclic reduction: same limit as the dense route, but every solve
// runs through GTH on (Zoff, u, v_l), so no subtraction ever touches the
// data that determines the result's entries.
XpMatrix xp_cr_triplet(const TripletRep& t, bool singular_hint) {
    std::size_t n = t.n;
    std::vector<XpScalar> u(n), v(n), diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = XpScalar(t.u[i]);
        v[i] = XpScalar(t.v[i]);
    }
    XpMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p(i, j) = XpScalar(t.P(i, j));

    XpScalar maxd;
    for (std::size_t i = 0; i < n; ++i) {
        XpScalar acc = v[i];
        for (std::size_t j = 0; j < n; ++j) acc = xp_add(acc, xp_mul(p(i, j), u[j]));
        diag[i] = xp_div(acc, u[i]);
        if (xp_less(maxd, diag[i])) maxd = diag[i];
    }
    XpScalar s = xp_mul(XpScalar(4.0), maxd);
    if (xp_zero(s))
        fail(errc::zero_matrix, "xp_sqrtm_reference: zero matrix");

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) p(i, j) = xp_div(p(i, j), s);
        v[i] = xp_div(v[i], s);
        diag[i] = xp_div(diag[i], s);
    }

    XpScalar one(1.0), two(2.0);
    // W0 = A' - I stored by magnitude, Zoff = 2P', vcur = Z_l u, pcur as in
    // the coupled recursion p <- p + 2|W| Z^-1 p.
    XpMatrix wmag = p;
    for (std::size_t i = 0; i < n; ++i) wmag(i, i) = xp_sub(one, diag[i]);
    XpMatrix zoff(n, n);
    for (std::size_t i = 0; i < n * n; ++i) zoff.a[i] = xp_mul(p.a[i], two);
    std::vector<XpScalar> zdiag(n), vcur(n), pcur(n);
    for (std::size_t i = 0; i < n; ++i) {
        zdiag[i] = xp_mul(two, xp_add(one, diag[i]));
        vcur[i] = xp_mul(two, xp_add(u[i], v[i]));
        pcur[i] = xp_mul(XpScalar(4.0), v[i]);
    }

    // Componentwise stop, matching the binary64 solvers: every defect entry
    // must fall below tol relative to the matching accumulated Z entry.
    XpScalar tol(xp_ref_tol);
    auto converged_cw = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            XpScalar acc = vcur[i];
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) acc = xp_add(acc, xp_mul(zoff(i, j), u[j]));
            XpScalar di = xp_div(acc, u[i]);
            if (xp_less(xp_mul(tol, di), wmag(i, i))) return false;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && xp_less(xp_mul(tol, zoff(i, j)), wmag(i, j))) return false;
        }
        return true;
    };

    bool done = false;
    for (std::size_t it = 0; it < budget(singular_hint); ++it) {
        if (converged_cw()) {
            done = true;
            break;
        }
        XpGth f = xp_gth_factor(zoff, u, vcur);
        XpMatrix g = xp_gth_solve(f, wmag);
        XpMatrix rhs(n, 1);
        for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = pcur[i];
        XpMatrix tcol = xp_gth_solve(f, rhs);

        XpMatrix wn = xp_mat_mul(wmag, g);
        for (std::size_t i = 0; i < n; ++i) {
            XpScalar acc;
            for (std::size_t j = 0; j < n; ++j)
                acc = xp_add(acc, xp_mul(wmag(i, j), tcol(j, 0)));
            pcur[i] = xp_add(pcur[i], xp_mul(two, acc));
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                zoff(i, j) = xp_add(zoff(i, j), xp_mul(two, wn(i, j)));
            }
            zdiag[i] = xp_sub(zdiag[i], xp_mul(two, wn(i, i)));
        }
        for (std::size_t i = 0; i < n; ++i) {
            XpScalar acc;
            for (std::size_t j = 0; j < n; ++j)
                acc = xp_add(acc, xp_mul(wn(i, j), u[j]));
            vcur[i] = xp_add(pcur[i], xp_mul(two, acc));
        }
        wmag = std::move(wn);
    }
    if (!done)
        fail(errc::no_convergence, "xp_sqrtm_reference: tolerance not reached");

    XpScalar scale = xp_div(xp_sqrt(s), XpScalar(4.0));
    XpMatrix x(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        XpScalar acc = vcur[i];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) acc = xp_add(acc, xp_mul(zoff(i, j), u[j]));
        x(i, i) = xp_mul(xp_div(acc, u[i]), scale);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) x(i, j) = xp_neg(xp_mul(zoff(i, j), scale));
    }
    return x;
}

} // namespace

XpMatrix xp_sqrtm_reference(const DenseMatrix& a, bool singular_hint, XpRoute route) {
    if (a.rows() != a.cols() || a.rows() == 0)
        fail(errc::dimension_mismatch, "xp_sqrtm_reference: matrix must be square");
    switch (route) {
        case XpRoute::cr_dense: return xp_cr_dense(xp_from(a), singular_hint);
        case XpRoute::in_dense: return xp_in_dense(xp_from(a), singular_hint);
        case XpRoute::cr_triplet:
            fail(errc::bad_option, "xp_sqrtm_reference: triplet route needs a TripletRep");
    }
    fail(errc::bad_option, "xp_sqrtm_reference: unknown route");
}

XpMatrix xp_sqrtm_reference(const TripletRep& t, bool singular_hint, XpRoute route) {
    if (t.n == 0)
        fail(errc::dimension_mismatch, "xp_sqrtm_reference: empty triplet");
    if (route == XpRoute::cr_triplet) return xp_cr_triplet(t, singular_hint);
    return xp_sqrtm_reference(reconstruct(t), singular_hint, route);
}

DenseVector xp_gth_solve_reference(const TripletRep& t, const DenseVector& b) {
    std::size_t n = t.n;
    if (b.size() != n)
        fail(errc::dimension_mismatch, "xp_gth_solve_reference: rhs size mismatch");
    XpMatrix zoff(n, n);
    std::vector<XpScalar> u(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = XpScalar(t.u[i]);
        w[i] = XpScalar(t.v[i]);
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) zoff(i, j) = XpScalar(t.P(i, j));
    }
    XpGth f = xp_gth_factor(zoff, u, std::move(w));
    XpMatrix rhs(n, 1);
    for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = XpScalar(b[i]);
    XpMatrix x = xp_gth_solve(f, rhs);
    DenseVector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = to_double(x(i, 0));
    return out;
}

CompError comp_error(const DenseMatrix& x, const XpMatrix& r) {
    if (x.rows() != r.rows || x.cols() != r.cols)
        fail(errc::dimension_mismatch, "comp_error: shape mismatch");
    CompError ce;
    ce.entrywise = DenseMatrix(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            XpScalar ref = r(i, j);
            double err;
            if (to_double(xp_abs(ref)) <= 1e-300) {
                err = std::fabs(x(i, j));
                ++ce.tiny_count;
            } else {
                XpScalar d = xp_abs(xp_sub(XpScalar(x(i, j)), ref));
                err = to_double(xp_div(d, xp_abs(ref)));
            }
            ce.entrywise(i, j) = err;
            if (err > ce.max_rel) ce.max_rel = err;
        }
    return ce;
}

double xp_residual(const XpMatrix& r, const DenseMatrix& a) {
    XpMatrix rr = xp_mat_mul(r, r);
    XpMatrix am = xp_from(a);
    for (std::size_t i = 0; i < rr.a.size(); ++i) rr.a[i] = xp_sub(rr.a[i], am.a[i]);
    return to_double(xp_div(xp_inf_norm(rr), xp_inf_norm(am)));
}

} // namespace msqrt::xp
