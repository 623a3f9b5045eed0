#pragma once

#include <cstddef>
#include <vector>

#include "msqrt/dense.hpp"
#include "msqrt/triplet.hpp"

namespace msqrt::xp {

// Double-word scalar: value = hi + lo, unevaluated, |lo| <= ulp(hi)/2.
// Each arithmetic op keeps relative error within a few eps^2
// (eps = 2^-53), which is what the reference solver needs.
struct XpScalar {
    double hi = 0.0, lo = 0.0;
    XpScalar() = default;
    XpScalar(double x) : hi(x) {}
    XpScalar(double h, double l) : hi(h), lo(l) {}
};

// two_prod is built on std::fma; recorded here as build metadata.
inline constexpr bool two_prod_uses_fma = true;

XpScalar xp_add(XpScalar a, XpScalar b);
XpScalar xp_sub(XpScalar a, XpScalar b);
XpScalar xp_mul(XpScalar a, XpScalar b);
XpScalar xp_div(XpScalar a, XpScalar b);
XpScalar xp_sqrt(XpScalar a);
XpScalar xp_neg(XpScalar a);
XpScalar xp_abs(XpScalar a);

inline double to_double(XpScalar a) { return a.hi + a.lo; }
bool xp_less(XpScalar a, XpScalar b);
inline bool xp_zero(XpScalar a) { return a.hi == 0.0 && a.lo == 0.0; }

inline XpScalar operator+(XpScalar a, XpScalar b) { return xp_add(a, b); }
inline XpScalar operator-(XpScalar a, XpScalar b) { return xp_sub(a, b); }
inline XpScalar operator*(XpScalar a, XpScalar b) { return xp_mul(a, b); }
inline XpScalar operator/(XpScalar a, XpScalar b) { return xp_div(a, b); }
inline XpScalar operator-(XpScalar a) { return xp_neg(a); }

// Parse a plain decimal literal ("1.41421...") into a double-word value.
// Digits are folded in exactly; only the final descale rounds.
XpScalar xp_from_decimal(const char* s);

struct XpMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<XpScalar> a;

    XpMatrix() = default;
    XpMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    XpScalar& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    XpScalar operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static XpMatrix identity(std::size_t n);
};

XpMatrix xp_from(const DenseMatrix& m);
DenseMatrix xp_round(const XpMatrix& m);
XpMatrix xp_mat_mul(const XpMatrix& a, const XpMatrix& b);
XpScalar xp_inf_norm(const XpMatrix& m);

// Reference square root routes. The dense routes run the plain matrix
// recurrences with partially pivoted LU solves in double-word arithmetic.
// The triplet route keeps the representation (P, u, v) exact and eliminates
// without subtractions, so small entries of the result stay trustworthy even
// for badly scaled inputs; the comparison harness uses it.
enum class XpRoute { cr_dense, in_dense, cr_triplet };

inline constexpr double xp_ref_tol = 1e-27;
inline constexpr std::size_t xp_ref_max_iter = 200;

XpMatrix xp_sqrtm_reference(const DenseMatrix& a, bool singular_hint,
                            XpRoute route = XpRoute::cr_dense);
XpMatrix xp_sqrtm_reference(const TripletRep& t, bool singular_hint,
                            XpRoute route = XpRoute::cr_triplet);

// A^{-1} b for a triplet-represented A, eliminated without subtractions in
// double-word arithmetic and rounded back. Reference for componentwise solve
// accuracy checks.
DenseVector xp_gth_solve_reference(const TripletRep& t, const DenseVector& b);

// Componentwise relative error of X against the reference R. Entries of R at
// or below 1e-300 in magnitude are compared absolutely (error = |x|) and
// counted in tiny_count so reports can flag them.
struct CompError {
    double max_rel = 0.0;
    DenseMatrix entrywise;
    std::size_t tiny_count = 0;
};

CompError comp_error(const DenseMatrix& x, const XpMatrix& r);

// ||R*R - A||_inf / ||A||_inf evaluated in double-word arithmetic.
double xp_residual(const XpMatrix& r, const DenseMatrix& a);

} // namespace msqrt::xp
