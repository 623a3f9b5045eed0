#include "msqrt/io.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace msqrt {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct Tok {
    std::string s;
    std::size_t line;
};

[[noreturn]] void parse_fail(const std::string& name, std::size_t line, const std::string& msg) {
    fail(errc::parse_error, name + ":" + std::to_string(line) + ": " + msg);
}

// Splits everything after the header line into whitespace tokens; lines whose
// first non-blank character is '%' are comments.
std::vector<Tok> tokenize_body(std::istream& is, std::size_t first_line) {
    std::vector<Tok> toks;
    std::string line;
    std::size_t lineno = first_line;
    while (std::getline(is, line)) {
        ++lineno;
        std::size_t k = line.find_first_not_of(" \t\r");
        if (k == std::string::npos || line[k] == '%') continue;
        std::istringstream ls(line);
        std::string w;
        while (ls >> w) toks.push_back({w, lineno});
    }
    return toks;
}

const Tok& need(const std::vector<Tok>& toks, std::size_t idx, const std::string& name,
                const std::string& what) {
    if (idx >= toks.size()) {
        std::size_t line = toks.empty() ? 1 : toks.back().line;
        parse_fail(name, line, "unexpected end of file, expected " + what);
    }
    return toks[idx];
}

long long parse_int(const Tok& t, const std::string& name, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(t.s.c_str(), &end, 10);
    if (errno != 0 || end == t.s.c_str() || *end != '\0')
        parse_fail(name, t.line, "expected " + what + ", got '" + t.s + "'");
    return v;
}

double parse_double(const Tok& t, const std::string& name, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(t.s.c_str(), &end);
    if (end == t.s.c_str() || *end != '\0')
        parse_fail(name, t.line, "expected " + what + ", got '" + t.s + "'");
    if (!std::isfinite(v)) parse_fail(name, t.line, what + " must be finite, got '" + t.s + "'");
    return v;
}

std::string lower(std::string s) {
    for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) fail(errc::io_error, "cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(errc::io_error, "cannot open '" + path + "' for reading");
    return is;
}

} // namespace

void write_matrix_market(std::ostream& os, const DenseMatrix& a) {
    os << "%%MatrixMarket matrix array real general\n";
    os << a.rows() << " " << a.cols() << "\n";
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) os << fmt17(a(i, j)) << "\n";
    if (!os) fail(errc::io_error, "write failed");
}

void write_matrix_market(const std::string& path, const DenseMatrix& a) {
    auto os = open_out(path);
    write_matrix_market(os, a);
}

DenseMatrix read_matrix_market(std::istream& is, const std::string& name) {
    std::string header;
    if (!std::getline(is, header)) parse_fail(name, 1, "empty file");
    std::istringstream hs(header);
    std::string bang, object, format, field, symmetry;
    hs >> bang >> object >> format >> field >> symmetry;
    if (lower(bang) != "%%matrixmarket" || lower(object) != "matrix")
        parse_fail(name, 1, "not a MatrixMarket matrix file");
    if (lower(format) != "array" || lower(field) != "real" || lower(symmetry) != "general")
        parse_fail(name, 1, "only 'array real general' files are supported");

    auto toks = tokenize_body(is, 1);
    std::size_t k = 0;
    long long rows = parse_int(need(toks, k, name, "row count"), name, "row count");
    ++k;
    long long cols = parse_int(need(toks, k, name, "column count"), name, "column count");
    ++k;
    if (rows <= 0 || cols <= 0)
        parse_fail(name, toks[k - 1].line, "dimensions must be positive");

    DenseMatrix a{std::size_t(rows), std::size_t(cols)};
    for (long long j = 0; j < cols; ++j)
        for (long long i = 0; i < rows; ++i) {
            const Tok& t = need(toks, k, name, "matrix entry");
            a(std::size_t(i), std::size_t(j)) = parse_double(t, name, "matrix entry");
            ++k;
        }
    if (k != toks.size()) parse_fail(name, toks[k].line, "trailing data after the last entry");
    return a;
}

DenseMatrix read_matrix_market(const std::string& path) {
    auto is = open_in(path);
    return read_matrix_market(is, path);
}

DenseVector read_vector(const std::string& path) {
    DenseMatrix m = read_matrix_market(path);
    if (m.cols() != 1)
        fail(errc::parse_error, path + ": expected an n-by-1 array, got " +
                                    std::to_string(m.rows()) + "-by-" + std::to_string(m.cols()));
    DenseVector v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, 0);
    return v;
}

void write_triplet(std::ostream& os, const TripletRep& t) {
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.n; ++j)
            if (i != j && t.P(i, j) != 0.0) ++nnz;
    os << "%%TripletRep 1.0\n";
    os << t.n << " " << nnz << "\n";
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.n; ++j)
            if (i != j && t.P(i, j) != 0.0)
                os << (i + 1) << " " << (j + 1) << " " << fmt17(t.P(i, j)) << "\n";
    for (std::size_t i = 0; i < t.n; ++i) os << (i ? " " : "") << fmt17(t.u[i]);
    os << "\n";
    for (std::size_t i = 0; i < t.n; ++i) os << (i ? " " : "") << fmt17(t.v[i]);
    os << "\n";
    if (!os) fail(errc::io_error, "write failed");
}

void write_triplet(const std::string& path, const TripletRep& t) {
    auto os = open_out(path);
    write_triplet(os, t);
}

TripletRep read_triplet(std::istream& is, const std::string& name) {
    std::string header;
    if (!std::getline(is, header)) parse_fail(name, 1, "empty file");
    std::istringstream hs(header);
    std::string magic, version;
    hs >> magic >> version;
    if (magic != "%%TripletRep") parse_fail(name, 1, "not a TripletRep file");
    if (version != "1.0") parse_fail(name, 1, "unsupported version '" + version + "'");

    auto toks = tokenize_body(is, 1);
    std::size_t k = 0;
    long long n = parse_int(need(toks, k, name, "order n"), name, "order n");
    ++k;
    long long nnz = parse_int(need(toks, k, name, "nonzero count"), name, "nonzero count");
    ++k;
    if (n <= 0) parse_fail(name, toks[k - 2].line, "order must be positive");
    if (nnz < 0 || nnz > n * (n - 1))
        parse_fail(name, toks[k - 1].line, "nonzero count out of range");

    TripletRep t;
    t.n = std::size_t(n);
    t.P = DenseMatrix(t.n, t.n);
    std::set<std::pair<long long, long long>> seen;
    for (long long e = 0; e < nnz; ++e) {
        const Tok& ti = need(toks, k, name, "row index");
        long long i = parse_int(ti, name, "row index");
        ++k;
        long long j = parse_int(need(toks, k, name, "column index"), name, "column index");
        ++k;
        double p = parse_double(need(toks, k, name, "entry value"), name, "entry value");
        ++k;
        if (i < 1 || i > n || j < 1 || j > n)
            parse_fail(name, ti.line, "index out of range (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
        if (i == j) parse_fail(name, ti.line, "diagonal entries are implied and may not be stored");
        if (p < 0.0) parse_fail(name, ti.line, "entries must be nonnegative");
        if (!seen.insert({i, j}).second)
            parse_fail(name, ti.line, "duplicate entry (" + std::to_string(i) + "," +
                                          std::to_string(j) + ")");
        t.P(std::size_t(i - 1), std::size_t(j - 1)) = p + 0.0;
    }
    t.u.resize(t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
        t.u[i] = parse_double(need(toks, k, name, "u entry"), name, "u entry");
        ++k;
    }
    t.v.resize(t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
        t.v[i] = parse_double(need(toks, k, name, "v entry"), name, "v entry");
        ++k;
    }
    if (k != toks.size()) parse_fail(name, toks[k].line, "trailing data after the v line");
    validate(t);
    return t;
}

TripletRep read_triplet(const std::string& path) {
    auto is = open_in(path);
    return read_triplet(is, path);
}

bool looks_like_triplet_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(errc::io_error, "cannot open '" + path + "' for reading");
    std::string header;
    if (!std::getline(is, header)) return false;
    return header.rfind("%%TripletRep", 0) == 0;
}

} // namespace msqrt
