#include "msqrt/triplet.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "msqrt/baselines.hpp"

namespace msqrt {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Smallest k with 2^k >= n.
std::size_t ceil_log2(std::size_t n) {
    std::size_t k = 0, p = 1;
    while (p < n) {
        p <<= 1;
        ++k;
    }
    return k;
}

// Row tolerance for A*u consistency checks: n*ceil(log2 n)*eps relative to
// the row magnitude |a_i|*u, padded by two roundings for the tiny cases.
double row_tol(std::size_t n, double row_scale) {
    return (double(n) * double(ceil_log2(n)) + 2.0) * eps * row_scale;
}

} // namespace

TripletRep from_full(const DenseMatrix& a, const DenseVector& u) {
    if (a.rows() != a.cols() || a.rows() == 0)
        fail(errc::dimension_mismatch, "from_full: matrix must be square and nonempty");
    std::size_t n = a.rows();
    if (u.size() != n)
        fail(errc::dimension_mismatch, "from_full: u has wrong length");
    for (std::size_t i = 0; i < n; ++i)
        if (!(u[i] > 0.0))
            fail(errc::u_not_positive, "from_full: u must be strictly positive, index " +
                                           std::to_string(i));

    TripletRep t;
    t.n = n;
    t.P = DenseMatrix(n, n);
    t.u = u;
    t.v.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (a(i, j) > 0.0)
                fail(errc::not_z_matrix, "from_full: positive off-diagonal at (" +
                                             std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            t.P(i, j) = -a(i, j);
        }

    thread_local std::vector<double> mag;
    for (std::size_t i = 0; i < n; ++i) {
        double vi = pairwise_dot(a.row(i), std::span<const double>(u));
        auto r = a.row(i);
        mag.resize(n);
        for (std::size_t j = 0; j < n; ++j) mag[j] = std::fabs(r[j]);
        double rs = pairwise_dot(std::span<const double>(mag), std::span<const double>(u));
        if (vi < 0.0) {
            if (vi < -row_tol(n, rs))
                fail(errc::v_negative, "from_full: (A*u)_" + std::to_string(i + 1) +
                                           " is negative beyond roundoff");
            vi = 0.0;
        }
        t.v[i] = vi;
    }
    return t;
}

DenseVector implied_diag(const TripletRep& t) {
    DenseVector d(t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
        double y = pairwise_dot_nonneg(t.P.row(i), std::span<const double>(t.u));
        d[i] = (t.v[i] + y) / t.u[i];
    }
    return d;
}

DenseMatrix reconstruct(const TripletRep& t) {
    DenseMatrix a(t.n, t.n);
    DenseVector d = implied_diag(t);
    for (std::size_t i = 0; i < t.n; ++i) {
        for (std::size_t j = 0; j < t.n; ++j) a(i, j) = -t.P(i, j);
        a(i, i) = d[i];
    }
    return a;
}

TripletRep scale(const TripletRep& t, double s) {
    if (!(s > 0.0) || !std::isfinite(s))
        fail(errc::bad_option, "scale: scale factor must be positive and finite");
    TripletRep r;
    r.n = t.n;
    r.u = t.u;
    r.P = DenseMatrix(t.n, t.n);
    r.v.resize(t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
        for (std::size_t j = 0; j < t.n; ++j) r.P(i, j) = t.P(i, j) / s;
        r.v[i] = t.v[i] / s;
    }
    return r;
}

void validate(const TripletRep& t) {
    std::size_t n = t.n;
    if (n == 0 || t.P.rows() != n || t.P.cols() != n || t.u.size() != n || t.v.size() != n)
        fail(errc::invalid_triplet, "validate: inconsistent dimensions");
    if (!all_finite(t.P) || !all_finite(t.u) || !all_finite(t.v))
        fail(errc::nonfinite_value, "validate: nonfinite entry");
    for (std::size_t i = 0; i < n; ++i) {
        if (t.P(i, i) != 0.0)
            fail(errc::invalid_triplet, "validate: nonzero diagonal in P at " + std::to_string(i + 1));
        if (!(t.u[i] > 0.0))
            fail(errc::u_not_positive, "validate: u must be strictly positive, index " +
                                           std::to_string(i + 1));
        if (t.v[i] < 0.0)
            fail(errc::v_negative, "validate: negative v at index " + std::to_string(i + 1));
        for (std::size_t j = 0; j < n; ++j)
            if (t.P(i, j) < 0.0)
                fail(errc::invalid_triplet, "validate: negative entry in P at (" +
                                                std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }

    // Row consistency: the reconstructed matrix must satisfy A*u = v up to
    // the summation error admitted by the tree.
    DenseMatrix a = reconstruct(t);
    thread_local std::vector<double> mag;
    for (std::size_t i = 0; i < n; ++i) {
        double ri = pairwise_dot(a.row(i), std::span<const double>(t.u));
        auto r = a.row(i);
        mag.resize(n);
        for (std::size_t j = 0; j < n; ++j) mag[j] = std::fabs(r[j]);
        double rs = pairwise_dot(std::span<const double>(mag), std::span<const double>(t.u));
        if (std::fabs(ri - t.v[i]) > row_tol(n, rs))
            fail(errc::invalid_triplet,
                 "validate: row " + std::to_string(i + 1) + " violates A*u = v beyond roundoff");
    }
}

bool is_singular_rep(const TripletRep& t) {
    for (double x : t.v)
        if (x != 0.0) return false;
    return true;
}

namespace {

// Iterative Tarjan; emits components sinks-first, so reversing the emission
// order makes the permuted matrix block upper triangular.
std::vector<std::vector<std::size_t>> strongly_connected(const DenseMatrix& a) {
    std::size_t n = a.rows();
    constexpr std::size_t unset = std::size_t(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0);
    std::vector<bool> onstk(n, false);
    std::vector<std::size_t> stk;
    std::vector<std::vector<std::size_t>> comps;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v, edge;
    };
    std::vector<Frame> frames;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = counter++;
        stk.push_back(root);
        onstk[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < n) {
                std::size_t w = f.edge++;
                if (w == f.v || a(f.v, w) == 0.0) continue;
                if (index[w] == unset) {
                    index[w] = low[w] = counter++;
                    stk.push_back(w);
                    onstk[w] = true;
                    frames.push_back({w, 0});
                } else if (onstk[w] && index[w] < low[f.v]) {
                    low[f.v] = index[w];
                }
                continue;
            }
            std::size_t v = f.v;
            frames.pop_back();
            if (!frames.empty() && low[v] < low[frames.back().v]) low[frames.back().v] = low[v];
            if (low[v] == index[v]) {
                comps.emplace_back();
                for (;;) {
                    std::size_t w = stk.back();
                    stk.pop_back();
                    onstk[w] = false;
                    comps.back().push_back(w);
                    if (w == v) break;
                }
            }
        }
    }
    return comps;
}

bool block_is_singular(const DenseMatrix& block) {
    std::size_t m = block.rows();
    double norm = inf_norm(block);
    if (norm == 0.0) return true;
    LuPivFactors f = lu_piv_factorize(block);
    if (f.singular) return true;
    return std::fabs(f.lu(m - 1, m - 1)) <= double(m) * eps * norm;
}

} // namespace

FrobeniusForm frobenius_form(const DenseMatrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0)
        fail(errc::dimension_mismatch, "frobenius_form: matrix must be square and nonempty");
    auto comps = strongly_connected(a);

    FrobeniusForm ff;
    ff.block_boundaries.push_back(0);
    for (auto it = comps.rbegin(); it != comps.rend(); ++it) {
        for (std::size_t v : *it) ff.perm.push_back(v);
        ff.block_boundaries.push_back(ff.perm.size());
    }
    for (std::size_t b = 0; b + 1 < ff.block_boundaries.size(); ++b) {
        std::size_t lo = ff.block_boundaries[b], hi = ff.block_boundaries[b + 1];
        DenseMatrix blk(hi - lo, hi - lo);
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = lo; j < hi; ++j)
                blk(i - lo, j - lo) = a(ff.perm[i], ff.perm[j]);
        ff.block_singular.push_back(block_is_singular(blk));
    }
    return ff;
}

bool has_triplet(const DenseMatrix& a) {
    std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && a(i, j) > 0.0)
                fail(errc::not_z_matrix, "has_triplet: positive off-diagonal entry");

    FrobeniusForm ff = frobenius_form(a);
    std::size_t nb = ff.block_singular.size();
    for (std::size_t b = 0; b < nb; ++b) {
        if (!ff.block_singular[b]) continue;
        std::size_t lo = ff.block_boundaries[b], hi = ff.block_boundaries[b + 1];
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (j >= lo && j < hi) continue;
                if (a(ff.perm[i], ff.perm[j]) != 0.0) return false;
            }
    }
    return true;
}

} // namespace msqrt
