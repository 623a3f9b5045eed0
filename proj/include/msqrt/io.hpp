#pragma once

#include <iosfwd>
#include <string>

#include "msqrt/dense.hpp"
#include "msqrt/triplet.hpp"

namespace msqrt {

// Matrix Market "array real general" files, entries column-major, written
// with 17 significant digits so values round-trip exactly.
void write_matrix_market(std::ostream& os, const DenseMatrix& a);
void write_matrix_market(const std::string& path, const DenseMatrix& a);
DenseMatrix read_matrix_market(std::istream& is, const std::string& name = "<stream>");
DenseMatrix read_matrix_market(const std::string& path);

// Column vector stored as an n-by-1 array file.
DenseVector read_vector(const std::string& path);

// Triplet text format:
//   %%TripletRep 1.0
//   n nnz
//   i j p        (nnz lines, 1-based indices, i != j, p >= 0)
//   u_1 ... u_n
//   v_1 ... v_n
// Comment lines starting with % may follow the header line.
void write_triplet(std::ostream& os, const TripletRep& t);
void write_triplet(const std::string& path, const TripletRep& t);
TripletRep read_triplet(std::istream& is, const std::string& name = "<stream>");
TripletRep read_triplet(const std::string& path);

// Peeks at the first line to distinguish the two container formats.
bool looks_like_triplet_file(const std::string& path);

} // namespace msqrt
