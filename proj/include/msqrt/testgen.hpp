#pragma once

#include <cstdint>
#include <string>

#include "msqrt/triplet.hpp"

namespace msqrt {

// Singular graph Laplacian with a companion-style pattern: every node feeds
// the last one, node i feeds node i-1, diagonal balances the row sums.
TripletRep gen_test1(std::size_t n);

// Singular lower-Hessenberg pattern of all ones, with u = (eps, 1, ..., 1).
// Small eps makes the first row/column of the root badly scaled.
TripletRep gen_test2(std::size_t n, double eps_unbalance);

// Nonsingular integer-valued family: diagonal n, -1 on the strict upper
// triangle and on a lower band of width n/4.
TripletRep gen_test3(std::size_t n);

// Random triplet. All randomness comes from a single mt19937_64 seeded with
// `seed`; uniforms are (x >> 11) * 2^-53. Draw order: for each (i, j) pair in
// row-major order, one draw decides presence (< density) and, when present,
// a second draw gives the weight in [0, 1); then n draws give u in
// [0.5, 2.0); then, unless singular, n draws give v in [0.5, 2.0).
TripletRep gen_random(std::size_t n, std::uint64_t seed, bool singular, double density = 0.5);

struct TestSpec {
    std::string family;          // "1", "2", "3", or "random"
    std::size_t n = 0;
    double eps_unbalance = 1e-8; // family 2
    std::uint64_t seed = 1;      // family random
    bool singular = true;        // family random
    double density = 0.5;        // family random
};

TripletRep generate(const TestSpec& spec);

} // namespace msqrt
