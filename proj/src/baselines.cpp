#include "msqrt/baselines.hpp"

#include <cmath>

namespace msqrt {

LuPivFactors lu_piv_factorize(DenseMatrix a) {
    if (a.rows() != a.cols())
        fail(errc::dimension_mismatch, "lu_piv_factorize: matrix must be square");
    std::size_t n = a.rows();
    LuPivFactors f;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::fabs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double cand = std::fabs(a(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best == 0.0) {
            // Keep factorizing: callers probing for singularity want the
            // factorization to finish with the zero pivot left in place.
            f.singular = true;
            continue;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            double l = a(i, k) / a(k, k);
            a(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

DenseMatrix lu_piv_apply(const LuPivFactors& f, const DenseMatrix& b) {
    std::size_t n = f.lu.rows();
    if (b.rows() != n)
        fail(errc::dimension_mismatch, "lu_piv_apply: right-hand side rows disagree");
    if (f.singular)
        fail(errc::lu_singular, "lu_piv_apply: matrix is singular");
    DenseMatrix x(n, b.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = b(f.perm[i], j);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) {
            double l = f.lu(i, k);
            if (l == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) -= l * x(k, j);
        }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
            double u = f.lu(ii, k);
            if (u == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) x(ii, j) -= u * x(k, j);
        }
        double d = f.lu(ii, ii);
        if (d == 0.0)
            fail(errc::lu_singular, "lu_piv_apply: zero pivot");
        for (std::size_t j = 0; j < b.cols(); ++j) x(ii, j) /= d;
    }
    return x;
}

DenseMatrix lu_piv_solve(const DenseMatrix& a, const DenseMatrix& b) {
    return lu_piv_apply(lu_piv_factorize(a), b);
}

DenseVector lu_piv_solve(const DenseMatrix& a, const DenseVector& b) {
    DenseMatrix col(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) col(i, 0) = b[i];
    DenseMatrix x = lu_piv_solve(a, col);
    DenseVector r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = x(i, 0);
    return r;
}

DenseMatrix mat_mul_seq(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        fail(errc::dimension_mismatch, "mat_mul_seq: inner dimensions disagree");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double inf_norm_seq(const DenseMatrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
        if (s > best) best = s;
    }
    return best;
}

} // namespace msqrt
