#include "msqrt/dense.hpp"

#include <cmath>
#include <string>

namespace msqrt {

namespace {

bool g_sign_checks =
#ifdef NDEBUG
    false;
#else
    true;
#endif

double tree_sum(const double* a, std::size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return a[0];
    if (n == 2) return a[0] + a[1];
    std::size_t m = (n + 1) / 2;
    return tree_sum(a, m) + tree_sum(a + m, n - m);
}

void check_nonneg(std::span<const double> a, const char* who) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] < 0.0)
            fail(errc::sign_violation,
                 std::string(who) + ": negative operand at index " + std::to_string(i));
}

} // namespace

bool sign_checks_enabled() { return g_sign_checks; }
void set_sign_checks(bool on) { g_sign_checks = on; }

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double pairwise_sum(std::span<const double> a) {
    return tree_sum(a.data(), a.size());
}

double pairwise_dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        fail(errc::dimension_mismatch, "pairwise_dot: length mismatch");
    thread_local std::vector<double> prod;
    prod.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
    return tree_sum(prod.data(), prod.size());
}

double pairwise_sum_nonneg(std::span<const double> a) {
    if (g_sign_checks) check_nonneg(a, "pairwise_sum_nonneg");
    return tree_sum(a.data(), a.size());
}

double pairwise_dot_nonneg(std::span<const double> a, std::span<const double> b) {
    if (g_sign_checks) {
        check_nonneg(a, "pairwise_dot_nonneg");
        check_nonneg(b, "pairwise_dot_nonneg");
    }
    return pairwise_dot(a, b);
}

DenseMatrix mat_mul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        fail(errc::dimension_mismatch, "mat_mul: inner dimensions disagree");
    DenseMatrix bt = transpose(b);
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            c(i, j) = pairwise_dot(a.row(i), bt.row(j));
    return c;
}

DenseVector mat_vec(const DenseMatrix& a, const DenseVector& x) {
    if (a.cols() != x.size())
        fail(errc::dimension_mismatch, "mat_vec: dimensions disagree");
    DenseVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        y[i] = pairwise_dot(a.row(i), std::span<const double>(x));
    return y;
}

DenseMatrix mat_mul_nonneg(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        fail(errc::dimension_mismatch, "mat_mul_nonneg: inner dimensions disagree");
    DenseMatrix bt = transpose(b);
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            c(i, j) = pairwise_dot_nonneg(a.row(i), bt.row(j));
    return c;
}

DenseVector mat_vec_nonneg(const DenseMatrix& a, const DenseVector& x) {
    if (a.cols() != x.size())
        fail(errc::dimension_mismatch, "mat_vec_nonneg: dimensions disagree");
    DenseVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        y[i] = pairwise_dot_nonneg(a.row(i), std::span<const double>(x));
    return y;
}

double inf_norm(const DenseMatrix& a) {
    thread_local std::vector<double> mag;
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        mag.resize(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) mag[j] = std::fabs(r[j]);
        double s = pairwise_sum(mag);
        if (s > best) best = s;
    }
    return best;
}

double inf_norm(const DenseVector& v) {
    double best = 0.0;
    for (double x : v) {
        double a = std::fabs(x);
        if (a > best) best = a;
    }
    return best;
}

DenseVector comp_div(const DenseVector& a, const DenseVector& b) {
    if (a.size() != b.size())
        fail(errc::dimension_mismatch, "comp_div: length mismatch");
    DenseVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (b[i] == 0.0)
            fail(errc::zero_divisor, "comp_div: zero divisor at index " + std::to_string(i));
        r[i] = a[i] / b[i];
    }
    return r;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            t(j, i) = a(i, j);
    return t;
}

bool all_finite(const DenseMatrix& a) {
    for (double x : a.data())
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const DenseVector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

const char* errc_name(errc c) {
    switch (c) {
        case errc::dimension_mismatch: return "E_DIM";
        case errc::zero_divisor: return "E_ZERO_DIV";
        case errc::nonfinite_value: return "E_NONFINITE";
        case errc::not_z_matrix: return "E_NOT_Z";
        case errc::u_not_positive: return "E_U_NOT_POSITIVE";
        case errc::v_negative: return "E_V_NEGATIVE";
        case errc::no_triplet: return "E_NO_TRIPLET";
        case errc::invalid_triplet: return "E_INVALID_TRIPLET";
        case errc::gth_structural_zero_pivot: return "E_GTH_STRUCTURAL";
        case errc::gth_singular: return "E_GTH_SINGULAR";
        case errc::lu_singular: return "E_LU_SINGULAR";
        case errc::zero_matrix: return "E_ZERO_MATRIX";
        case errc::bad_option: return "E_BAD_OPTION";
        case errc::shift_requires_singular: return "E_SHIFT_NEEDS_SINGULAR";
        case errc::shift_requires_irreducible: return "E_SHIFT_NEEDS_IRREDUCIBLE";
        case errc::shift_no_column: return "E_SHIFT_NO_COLUMN";
        case errc::step_mismatch: return "E_STEP_MISMATCH";
        case errc::sign_violation: return "E_SIGN_VIOLATION";
        case errc::parse_error: return "E_PARSE";
        case errc::io_error: return "E_IO";
        case errc::no_convergence: return "E_NO_CONVERGENCE";
    }
    return "E_UNKNOWN";
}

} // namespace msqrt
