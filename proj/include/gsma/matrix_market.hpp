#pragma once

#include <string>
#include <variant>

#include "gsma/types.hpp"

namespace gsma {

/// Matrix Market reader/writer.  Coordinate and array formats, real /
/// integer / complex fields, general symmetry only.  Values round-trip
/// exactly through mm_write / mm_read.
std::variant<Matrix, SparseMatrix> mm_read(const std::string& path);

Matrix mm_read_dense(const std::string& path);
SparseMatrix mm_read_sparse(const std::string& path);

void mm_write(const std::string& path, const Matrix& M);
void mm_write(const std::string& path, const SparseMatrix& M);

}  // namespace gsma
