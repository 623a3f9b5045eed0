#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "msqrt/io.hpp"
#include "msqrt/testgen.hpp"

using namespace msqrt;

namespace {

struct TempDir {
    std::filesystem::path p;
    TempDir() {
        p = std::filesystem::temp_directory_path() /
            ("msqrt_io_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(p);
    }
    ~TempDir() { std::filesystem::remove_all(p); }
    std::string file(const std::string& name) const { return (p / name).string(); }
};

errc code_of_read(const std::string& text) {
    std::istringstream is(text);
    try {
        (void)read_matrix_market(is, "t");
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a parse error");
    return errc::parse_error;
}

errc code_of_trip(const std::string& text) {
    std::istringstream is(text);
    try {
        (void)read_triplet(is, "t");
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return errc::parse_error;
}

} // namespace

TEST_CASE("matrix market round trip is bit exact") {
    DenseMatrix a(2, 3);
    a(0, 0) = 0.1;
    a(0, 1) = -3.0;
    a(0, 2) = 1e-300;
    a(1, 0) = 12345.6789;
    a(1, 1) = 0x1.23456789abcdep-7;
    a(1, 2) = 2.0;
    std::ostringstream os;
    write_matrix_market(os, a);
    std::istringstream is(os.str());
    DenseMatrix b = read_matrix_market(is, "t");
    REQUIRE(b.rows() == 2);
    REQUIRE(b.cols() == 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(a(i, j) == b(i, j));
}

TEST_CASE("matrix market entries are column-major") {
    DenseMatrix a(2, 2);
    a(0, 0) = 1; a(1, 0) = 2; a(0, 1) = 3; a(1, 1) = 4;
    std::ostringstream os;
    write_matrix_market(os, a);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line); // banner
    std::getline(is, line); // dims
    double vals[4];
    for (double& v : vals) is >> v;
    CHECK(vals[0] == 1.0);
    CHECK(vals[1] == 2.0);
    CHECK(vals[2] == 3.0);
    CHECK(vals[3] == 4.0);
}

TEST_CASE("matrix market reader rejects malformed input") {
    CHECK(code_of_read("%%MatrixMarket matrix coordinate real general\n1 1\n1.0\n") ==
          errc::parse_error);
    CHECK(code_of_read("not a banner\n1 1\n1.0\n") == errc::parse_error);
    CHECK(code_of_read("%%MatrixMarket matrix array real general\n2 2\n1 2 3\n") ==
          errc::parse_error); // too few entries
    CHECK(code_of_read("%%MatrixMarket matrix array real general\n1 1\n1.0 junk\n") ==
          errc::parse_error); // trailing data
    CHECK(code_of_read("%%MatrixMarket matrix array real general\n0 2\n") ==
          errc::parse_error);
    CHECK(code_of_read("%%MatrixMarket matrix array complex general\n1 1\n1 0\n") ==
          errc::parse_error);
}

TEST_CASE("comment lines are skipped") {
    std::istringstream is(
        "%%MatrixMarket matrix array real general\n"
        "% produced by hand\n"
        "2 1\n"
        "% halfway comment\n"
        "5\n6\n");
    DenseMatrix a = read_matrix_market(is, "t");
    CHECK(a(0, 0) == 5.0);
    CHECK(a(1, 0) == 6.0);
}

TEST_CASE("read_vector insists on one column") {
    TempDir d;
    DenseMatrix col(3, 1);
    col(0, 0) = 1; col(1, 0) = 2; col(2, 0) = 3;
    write_matrix_market(d.file("v.mtx"), col);
    DenseVector v = read_vector(d.file("v.mtx"));
    REQUIRE(v.size() == 3);
    CHECK(v[2] == 3.0);

    DenseMatrix wide(1, 3);
    write_matrix_market(d.file("w.mtx"), wide);
    CHECK_THROWS_AS((void)read_vector(d.file("w.mtx")), Error);
}

TEST_CASE("triplet file round trip is bit exact") {
    TempDir d;
    for (bool singular : {false, true}) {
        TripletRep t = gen_random(7, 3, singular, 0.6);
        std::string path = d.file(singular ? "s.trip" : "n.trip");
        write_triplet(path, t);
        TripletRep b = read_triplet(path);
        CHECK(b.n == t.n);
        CHECK(b.P.data() == t.P.data());
        CHECK(b.u == t.u);
        CHECK(b.v == t.v);
        CHECK(looks_like_triplet_file(path));
    }

    DenseMatrix m(2, 2);
    m(0, 0) = 1;
    write_matrix_market(d.file("m.mtx"), m);
    CHECK_FALSE(looks_like_triplet_file(d.file("m.mtx")));
}

TEST_CASE("triplet reader rejects structural damage") {
    const std::string good =
        "%%TripletRep 1.0\n2 2\n1 2 1.0\n2 1 1.0\n1 1\n1 1\n";
    std::istringstream ok(good);
    TripletRep t = read_triplet(ok, "t");
    CHECK(t.P(0, 1) == 1.0);
    CHECK(t.v[0] == 1.0);

    CHECK(code_of_trip("%%NotTriplet 1.0\n1 0\n1\n1\n") == errc::parse_error);
    // diagonal entry
    CHECK(code_of_trip("%%TripletRep 1.0\n2 1\n1 1 1.0\n1 1\n0 0\n") == errc::parse_error);
    // out of range index
    CHECK(code_of_trip("%%TripletRep 1.0\n2 1\n1 3 1.0\n1 1\n0 0\n") == errc::parse_error);
    // negative weight
    CHECK(code_of_trip("%%TripletRep 1.0\n2 1\n1 2 -1.0\n1 1\n0 0\n") == errc::parse_error);
    // duplicate entry
    CHECK(code_of_trip("%%TripletRep 1.0\n2 2\n1 2 1.0\n1 2 2.0\n1 1\n0 0\n") ==
          errc::parse_error);
    // trailing garbage
    CHECK(code_of_trip(good + "extra\n") == errc::parse_error);
    // nonpositive u caught by validation
    CHECK(code_of_trip("%%TripletRep 1.0\n2 2\n1 2 1.0\n2 1 1.0\n0 1\n1 1\n") ==
          errc::u_not_positive);
    // v inconsistent with the stated entries
    CHECK(code_of_trip("%%TripletRep 1.0\n2 2\n1 2 1.0\n2 1 1.0\n1 1\n-1 1\n") ==
          errc::v_negative);
}

TEST_CASE("negative zero weights are normalized") {
    std::istringstream is("%%TripletRep 1.0\n2 1\n1 2 -0.0\n1 1\n1 1\n");
    TripletRep t = read_triplet(is, "t");
    CHECK(t.P(0, 1) == 0.0);
    CHECK_FALSE(std::signbit(t.P(0, 1)));
}

TEST_CASE("write_triplet stores only nonzero weights") {
    TripletRep t;
    t.n = 3;
    t.P = DenseMatrix(3, 3);
    t.P(0, 2) = 2.5;
    t.u.assign(3, 1.0);
    t.v = DenseVector{0.0, 0.0, 0.0};
    // v must satisfy A*u = v: diag = (v + P u)/u makes any P valid with v = 0
    std::ostringstream os;
    write_triplet(os, t);
    std::string text = os.str();
    CHECK(text.find("1 3 2.5") != std::string::npos);
    CHECK(text.find("\n3 3") == std::string::npos); // nnz line says 1
    std::istringstream is(text);
    TripletRep b = read_triplet(is, "t");
    CHECK(b.P(0, 2) == 2.5);
    CHECK(b.P(1, 0) == 0.0);
}

TEST_CASE("io_error on missing files") {
    try {
        (void)read_matrix_market("/nonexistent/path/x.mtx");
        FAIL("expected io_error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::io_error);
    }
    try {
        write_matrix_market("/nonexistent/dir/y.mtx", DenseMatrix(1, 1));
        FAIL("expected io_error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::io_error);
    }
}
