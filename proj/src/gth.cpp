#include "msqrt/gth.hpp"

#include <cmath>
#include <string>

namespace msqrt {

GthFactors gth_factorize(const TripletRep& t, GthStats* stats) {
    return gth_factorize(t.P, t.u, t.v, stats);
}

GthFactors gth_factorize(const DenseMatrix& p_off, const DenseVector& u, const DenseVector& v,
                         GthStats* stats) {
    std::size_t n = p_off.rows();
    if (p_off.cols() != n || u.size() != n || v.size() != n || n == 0)
        fail(errc::dimension_mismatch, "gth_factorize: inconsistent dimensions");
    for (std::size_t i = 0; i < n; ++i)
        if (!(u[i] > 0.0))
            fail(errc::u_not_positive, "gth_factorize: u must be strictly positive, index " +
                                           std::to_string(i + 1));

    GthFactors f;
    f.n = n;
    f.l_off = DenseMatrix(n, n);
    f.u_diag.resize(n);

    DenseMatrix m = p_off;        // eliminated in place; stays >= 0 throughout
    DenseVector w = v;            // running A*u of the uneliminated part
    unsigned long long flops = 0;
    const bool checks = sign_checks_enabled();

    for (std::size_t l = 0; l + 1 < n; ++l) {
        auto tail = m.row(l).subspan(l + 1);
        double num = w[l] + pairwise_dot_nonneg(tail, std::span<const double>(u).subspan(l + 1));
        flops += 2 * tail.size() + 1;
        if (!std::isfinite(num))
            fail(errc::nonfinite_value, "gth_factorize: nonfinite pivot at column " +
                                            std::to_string(l + 1));
        if (num == 0.0)
            fail(errc::gth_structural_zero_pivot,
                 "gth_factorize: zero pivot before the last column (column " +
                     std::to_string(l + 1) + ")");
        double piv = num / u[l];
        f.u_diag[l] = piv;
        flops += 1;

        for (std::size_t i = l + 1; i < n; ++i) {
            double lif = m(i, l) / piv;
            if (checks && !(lif >= 0.0))
                fail(errc::sign_violation, "gth_factorize: negative multiplier");
            f.l_off(i, l) = lif;
            flops += 1;
            if (lif == 0.0) continue;
            w[i] += lif * w[l];
            flops += 2;
            for (std::size_t j = l + 1; j < n; ++j) {
                if (j == i) continue;
                double add = lif * m(l, j);
                if (checks && !(add >= 0.0))
                    fail(errc::sign_violation, "gth_factorize: negative fill");
                m(i, j) += add;
                flops += 2;
            }
        }
    }

    if (w[n - 1] == 0.0)
        fail(errc::gth_singular, "gth_factorize: matrix is singular (final pivot vanished)");
    if (!std::isfinite(w[n - 1]))
        fail(errc::nonfinite_value, "gth_factorize: nonfinite final pivot");
    f.u_diag[n - 1] = w[n - 1] / u[n - 1];
    flops += 1;

    f.u_off = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) f.u_off(i, j) = m(i, j);

    if (stats) stats->flops += flops;
    return f;
}

namespace {

bool all_nonneg(const DenseMatrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (!(b(i, j) >= 0.0)) return false;
    return true;
}

} // namespace

DenseVector gth_solve_left(const GthFactors& f, const DenseVector& b) {
    std::size_t n = f.n;
    if (b.size() != n) fail(errc::dimension_mismatch, "gth_solve_left: rhs has wrong length");
    bool nn = sign_checks_enabled();
    if (nn)
        for (double x : b)
            if (!(x >= 0.0)) {
                nn = false;
                break;
            }

    DenseVector y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto lrow = f.l_off.row(i).first(i);
        auto ypre = std::span<const double>(y).first(i);
        double s = nn ? pairwise_dot_nonneg(lrow, ypre) : pairwise_dot(lrow, ypre);
        y[i] = b[i] + s;
    }
    for (std::size_t i = n; i-- > 0;) {
        auto urow = f.u_off.row(i).subspan(i + 1);
        auto xsuf = std::span<const double>(x).subspan(i + 1);
        double s = nn ? pairwise_dot_nonneg(urow, xsuf) : pairwise_dot(urow, xsuf);
        x[i] = (y[i] + s) / f.u_diag[i];
    }
    return x;
}

DenseMatrix gth_solve_left(const GthFactors& f, const DenseMatrix& b) {
    std::size_t n = f.n;
    if (b.rows() != n) fail(errc::dimension_mismatch, "gth_solve_left: rhs has wrong row count");
    bool nn = sign_checks_enabled() && all_nonneg(b);

    DenseMatrix x(n, b.cols());
    DenseVector y(n), col(n);
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            auto lrow = f.l_off.row(i).first(i);
            auto ypre = std::span<const double>(y).first(i);
            double s = nn ? pairwise_dot_nonneg(lrow, ypre) : pairwise_dot(lrow, ypre);
            y[i] = b(i, c) + s;
        }
        for (std::size_t i = n; i-- > 0;) {
            auto urow = f.u_off.row(i).subspan(i + 1);
            auto csuf = std::span<const double>(col).subspan(i + 1);
            double s = nn ? pairwise_dot_nonneg(urow, csuf) : pairwise_dot(urow, csuf);
            col[i] = (y[i] + s) / f.u_diag[i];
        }
        for (std::size_t i = 0; i < n; ++i) x(i, c) = col[i];
    }
    return x;
}

DenseMatrix gth_solve_right(const GthFactors& f, const DenseMatrix& b) {
    std::size_t n = f.n;
    if (b.cols() != n) fail(errc::dimension_mismatch, "gth_solve_right: rhs has wrong column count");
    std::size_t rows = b.rows();

    DenseMatrix ut = transpose(f.u_off);
    DenseMatrix lt = transpose(f.l_off);

    // Y U = B, columns left to right.
    DenseMatrix y(rows, n);
    for (std::size_t j = 0; j < n; ++j) {
        auto ucol = ut.row(j).first(j);
        for (std::size_t i = 0; i < rows; ++i) {
            double s = pairwise_dot(y.row(i).first(j), ucol);
            y(i, j) = (b(i, j) + s) / f.u_diag[j];
        }
    }
    // X L = Y, columns right to left.
    DenseMatrix x(rows, n);
    for (std::size_t j = n; j-- > 0;) {
        auto lcol = lt.row(j).subspan(j + 1);
        for (std::size_t i = 0; i < rows; ++i) {
            double s = pairwise_dot(x.row(i).subspan(j + 1), lcol);
            x(i, j) = y(i, j) + s;
        }
    }
    return x;
}

} // namespace msqrt
