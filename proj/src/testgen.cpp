#include "msqrt/testgen.hpp"

#include <random>

namespace msqrt {

TripletRep gen_test1(std::size_t n) {
    if (n < 2) fail(errc::bad_option, "gen_test1: n must be at least 2");
    TripletRep t;
    t.n = n;
    t.P = DenseMatrix(n, n);
    t.u.assign(n, 1.0);
    t.v.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n) t.P(i, n - 1) = 1.0;
        if (i > 0) t.P(i, i - 1) = 1.0;
    }
    return t;
}

TripletRep gen_test2(std::size_t n, double eps_unbalance) {
    if (n < 2) fail(errc::bad_option, "gen_test2: n must be at least 2");
    if (!(eps_unbalance > 0.0))
        fail(errc::bad_option, "gen_test2: unbalance parameter must be positive");
    TripletRep t;
    t.n = n;
    t.P = DenseMatrix(n, n);
    t.u.assign(n, 1.0);
    t.u[0] = eps_unbalance;
    t.v.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && i <= j + 1) t.P(i, j) = 1.0;
    return t;
}

TripletRep gen_test3(std::size_t n) {
    if (n < 2) fail(errc::bad_option, "gen_test3: n must be at least 2");
    TripletRep t;
    t.n = n;
    t.P = DenseMatrix(n, n);
    t.u.assign(n, 1.0);
    t.v.resize(n);
    double band = double(n) / 4.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t cnt = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            bool upper = j > i;
            bool lower = j < i && double(i - j) < band;
            if (upper || lower) {
                t.P(i, j) = 1.0;
                ++cnt;
            }
        }
        t.v[i] = double(n) - double(cnt); // exact: n dominates every row count
    }
    return t;
}

TripletRep gen_random(std::size_t n, std::uint64_t seed, bool singular, double density) {
    if (n == 0) fail(errc::bad_option, "gen_random: n must be positive");
    if (!(density >= 0.0 && density <= 1.0))
        fail(errc::bad_option, "gen_random: density must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };

    TripletRep t;
    t.n = n;
    t.P = DenseMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (u01() < density) t.P(i, j) = u01();
        }
    t.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.u[i] = 0.5 + 1.5 * u01();
    t.v.assign(n, 0.0);
    if (!singular)
        for (std::size_t i = 0; i < n; ++i) t.v[i] = 0.5 + 1.5 * u01();
    return t;
}

TripletRep generate(const TestSpec& spec) {
    if (spec.family == "1") return gen_test1(spec.n);
    if (spec.family == "2") return gen_test2(spec.n, spec.eps_unbalance);
    if (spec.family == "3") return gen_test3(spec.n);
    if (spec.family == "random")
        return gen_random(spec.n, spec.seed, spec.singular, spec.density);
    fail(errc::bad_option, "generate: unknown family '" + spec.family + "'");
}

} // namespace msqrt
