#include <cstdint>

#include "doctest.h"
#include "msqrt/testgen.hpp"

using namespace msqrt;

TEST_CASE("companion Laplacian family") {
    TripletRep t = gen_test1(5);
    validate(t);
    CHECK(is_singular_rep(t));
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(t.u[i] == 1.0);
        CHECK(t.v[i] == 0.0);
    }
    // rows feed the last node and their left neighbour
    CHECK(t.P(0, 4) == 1.0);
    CHECK(t.P(3, 4) == 1.0);
    CHECK(t.P(4, 4) == 0.0);
    CHECK(t.P(2, 1) == 1.0);
    CHECK(t.P(0, 1) == 0.0);
    DenseVector d = implied_diag(t);
    CHECK(d[0] == 1.0); // only the edge into the sink
    CHECK(d[2] == 2.0);
    CHECK(d[4] == 1.0); // only the subdiagonal edge

    CHECK_THROWS_AS((void)gen_test1(1), Error);
}

TEST_CASE("Hessenberg family with unbalanced direction") {
    TripletRep t = gen_test2(4, 1e-3);
    validate(t);
    CHECK(is_singular_rep(t));
    CHECK(t.u[0] == 1e-3);
    CHECK(t.u[1] == 1.0);
    // ones at i <= j+1 off the diagonal
    CHECK(t.P(0, 1) == 1.0);
    CHECK(t.P(0, 3) == 1.0);
    CHECK(t.P(1, 0) == 1.0);
    CHECK(t.P(2, 1) == 1.0);
    CHECK(t.P(2, 0) == 0.0);
    CHECK(t.P(3, 1) == 0.0);

    CHECK_THROWS_AS((void)gen_test2(4, 0.0), Error);
    CHECK_THROWS_AS((void)gen_test2(4, -1.0), Error);
}

TEST_CASE("integer family has exact integer data") {
    TripletRep t = gen_test3(4);
    validate(t);
    CHECK_FALSE(is_singular_rep(t));
    // band n/4 = 1 admits no subdiagonal at n = 4; row counts 3,2,1,0
    CHECK(t.v[0] == 1.0);
    CHECK(t.v[1] == 2.0);
    CHECK(t.v[2] == 3.0);
    CHECK(t.v[3] == 4.0);
    DenseVector d = implied_diag(t);
    for (std::size_t i = 0; i < 4; ++i) CHECK(d[i] == 4.0);

    TripletRep t8 = gen_test3(8);
    validate(t8);
    CHECK(t8.P(3, 2) == 1.0);  // band width 2 covers the first subdiagonal
    CHECK(t8.P(3, 1) == 0.0);
    DenseVector d8 = implied_diag(t8);
    for (std::size_t i = 0; i < 8; ++i) CHECK(d8[i] == 8.0);
}

TEST_CASE("random family is deterministic in the seed") {
    TripletRep a = gen_random(9, 42, false, 0.5);
    TripletRep b = gen_random(9, 42, false, 0.5);
    validate(a);
    CHECK(a.P.data() == b.P.data());
    CHECK(a.u == b.u);
    CHECK(a.v == b.v);

    TripletRep c = gen_random(9, 43, false, 0.5);
    CHECK(a.P.data() != c.P.data());

    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(a.u[i] >= 0.5);
        CHECK(a.u[i] < 2.0);
        CHECK(a.v[i] >= 0.5);
        CHECK(a.v[i] < 2.0);
    }
}

TEST_CASE("random family respects singularity and density switches") {
    TripletRep s = gen_random(6, 5, true, 0.5);
    validate(s);
    CHECK(is_singular_rep(s));

    TripletRep empty = gen_random(6, 5, false, 0.0);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(empty.P(i, j) == 0.0);

    TripletRep full = gen_random(6, 5, false, 1.0);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j) CHECK(full.P(i, j) > 0.0);

    CHECK_THROWS_AS((void)gen_random(0, 1, false), Error);
    CHECK_THROWS_AS((void)gen_random(4, 1, false, 1.5), Error);
}

TEST_CASE("generate dispatches on the family name") {
    TestSpec spec;
    spec.family = "1";
    spec.n = 6;
    TripletRep t = generate(spec);
    CHECK(t.P(0, 5) == 1.0);

    spec.family = "2";
    spec.eps_unbalance = 1e-5;
    t = generate(spec);
    CHECK(t.u[0] == 1e-5);

    spec.family = "3";
    t = generate(spec);
    CHECK(t.v[0] > 0.0);

    spec.family = "random";
    spec.seed = 11;
    spec.singular = false;
    t = generate(spec);
    CHECK(t.P.data() == gen_random(6, 11, false, 0.5).P.data());

    spec.family = "bogus";
    CHECK_THROWS_AS((void)generate(spec), Error);
}
