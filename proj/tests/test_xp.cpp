#include <cmath>

#include "doctest.h"
#include "msqrt/xp.hpp"

using namespace msqrt;
using namespace msqrt::xp;

namespace {

double rel_gap(XpScalar a, XpScalar b) {
    XpScalar d = xp_abs(xp_sub(a, b));
    return to_double(xp_div(d, xp_abs(b)));
}

} // namespace

TEST_CASE("double-word add keeps the low part") {
    XpScalar one(1.0);
    XpScalar tiny(0x1.0p-60);
    XpScalar s = xp_add(one, tiny);
    CHECK(s.hi == 1.0);
    CHECK(s.lo == 0x1.0p-60);
    XpScalar back = xp_sub(s, one);
    CHECK(to_double(back) == 0x1.0p-60);
}

TEST_CASE("double-word product is exact for small factors") {
    XpScalar a(1.0 + 0x1.0p-30);
    XpScalar p = xp_mul(a, a);
    // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60 needs 61 bits: exactly a double-word.
    CHECK(p.hi == 1.0 + 0x1.0p-29);
    CHECK(p.lo == 0x1.0p-60);
}

TEST_CASE("double-word division round trips") {
    XpScalar third = xp_div(XpScalar(1.0), XpScalar(3.0));
    XpScalar back = xp_mul(third, XpScalar(3.0));
    CHECK(rel_gap(back, XpScalar(1.0)) < 1e-31);
}

TEST_CASE("double-word sqrt against a frozen decimal expansion") {
    XpScalar r = xp_sqrt(XpScalar(2.0));
    XpScalar ref = xp_from_decimal("1.41421356237309504880168872420969807856967187537694");
    CHECK(rel_gap(r, ref) < 1e-31);
    CHECK(to_double(xp_sqrt(XpScalar(0.0))) == 0.0);
}

TEST_CASE("xp_from_decimal folds digits exactly") {
    XpScalar half = xp_from_decimal("1.5");
    CHECK(half.hi == 1.5);
    CHECK(half.lo == 0.0);
    XpScalar tenth = xp_from_decimal("0.1");
    CHECK(tenth.hi == 0.1);
    // following double-word after 0.1: |lo| bounded by half an ulp of hi
    CHECK(std::fabs(tenth.lo) <= 0x1.0p-53 * 0.1);
    XpScalar neg = xp_from_decimal("-2.25");
    CHECK(neg.hi == -2.25);
    CHECK(neg.lo == 0.0);
}

TEST_CASE("comparison and sign helpers") {
    CHECK(xp_less(XpScalar(1.0), XpScalar(2.0)));
    CHECK_FALSE(xp_less(XpScalar(2.0), XpScalar(2.0)));
    // differ only in the low word
    XpScalar a(1.0, 0x1.0p-60);
    XpScalar b(1.0, 0x1.0p-59);
    CHECK(xp_less(a, b));
    CHECK(to_double(xp_neg(a)) == -to_double(a));
    CHECK(to_double(xp_abs(xp_neg(a))) == to_double(a));
    CHECK(xp_zero(XpScalar(0.0)));
    CHECK_FALSE(xp_zero(XpScalar(0.0, 1e-300)));
}

TEST_CASE("XpMatrix round trip and product") {
    DenseMatrix a(2, 2);
    a(0, 0) = 2; a(0, 1) = -1; a(1, 0) = -1; a(1, 1) = 2;
    XpMatrix m = xp_from(a);
    DenseMatrix back = xp_round(m);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(back(i, j) == a(i, j));

    XpMatrix sq = xp_mat_mul(m, m);
    CHECK(to_double(sq(0, 0)) == 5.0);
    CHECK(to_double(sq(0, 1)) == -4.0);
    CHECK(to_double(xp_inf_norm(m)) == 3.0);

    XpMatrix id = XpMatrix::identity(3);
    CHECK(to_double(id(2, 2)) == 1.0);
    CHECK(to_double(id(0, 1)) == 0.0);
}

TEST_CASE("comp_error measures relative gaps and flags tiny references") {
    XpMatrix r(1, 2);
    r(0, 0) = XpScalar(2.0);
    r(0, 1) = XpScalar(1e-301);
    DenseMatrix x(1, 2);
    x(0, 0) = 2.0 + 2e-10;
    x(0, 1) = 5e-12;
    CompError ce = comp_error(x, r);
    CHECK(ce.max_rel == doctest::Approx(1e-10).epsilon(1e-6));
    CHECK(ce.tiny_count == 1);
    CHECK(ce.entrywise(0, 1) == 5e-12);
}

TEST_CASE("xp_residual of an exact root is zero") {
    DenseMatrix a = DenseMatrix::identity(3);
    XpMatrix r = XpMatrix::identity(3);
    CHECK(xp_residual(r, a) == 0.0);
}

TEST_CASE("reference routes agree on a well-scaled 2x2") {
    DenseMatrix a(2, 2);
    a(0, 0) = 2; a(0, 1) = -1; a(1, 0) = -1; a(1, 1) = 2;
    XpMatrix dcr = xp_sqrtm_reference(a, false, XpRoute::cr_dense);
    XpMatrix din = xp_sqrtm_reference(a, false, XpRoute::in_dense);
    TripletRep t = from_full(a, DenseVector{1.0, 1.0});
    XpMatrix tri = xp_sqrtm_reference(t, false, XpRoute::cr_triplet);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(rel_gap(dcr(i, j), tri(i, j)) < 1e-25);
            CHECK(rel_gap(din(i, j), tri(i, j)) < 1e-25);
        }
}

TEST_CASE("xp_gth_solve_reference matches a hand inverse") {
    DenseMatrix a(2, 2);
    a(0, 0) = 2; a(0, 1) = -1; a(1, 0) = -1; a(1, 1) = 2;
    TripletRep t = from_full(a, DenseVector{1.0, 1.0});
    DenseVector x = xp_gth_solve_reference(t, DenseVector{1.0, 0.0});
    CHECK(x[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)xp_gth_solve_reference(t, DenseVector{1.0}), Error);
}
