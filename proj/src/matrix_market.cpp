#include "gsma/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gsma/errors.hpp"

namespace gsma {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Header {
  bool coordinate = false;
  enum class Field { real, integer, cmplx } field = Field::real;
};

Header parse_header(const std::string& line, long lineno) {
  std::istringstream ss(line);
  std::string banner, object, format, field, symmetry;
  ss >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError("missing %%MatrixMarket banner", lineno);
  if (lower(object) != "matrix") throw ParseError("unsupported MatrixMarket object: " + object, lineno);

  Header h;
  format = lower(format);
  if (format == "coordinate")
    h.coordinate = true;
  else if (format == "array")
    h.coordinate = false;
  else
    throw ParseError("unknown MatrixMarket format: " + format, lineno);

  field = lower(field);
  if (field == "real")
    h.field = Header::Field::real;
  else if (field == "integer")
    h.field = Header::Field::integer;
  else if (field == "complex")
    h.field = Header::Field::cmplx;
  else if (field == "pattern")
    throw UnsupportedFormat("MatrixMarket pattern field is not supported");
  else
    throw ParseError("unknown MatrixMarket field: " + field, lineno);

  symmetry = lower(symmetry);
  if (symmetry != "general")
    throw UnsupportedFormat("MatrixMarket symmetry '" + symmetry + "' is not supported (general only)");
  return h;
}

bool next_data_line(std::istream& in, std::string& line, long& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

double parse_double(std::istringstream& ss, long lineno) {
  double v;
  if (!(ss >> v)) throw ParseError("malformed numeric value", lineno);
  return v;
}

Complex parse_value(std::istringstream& ss, Header::Field field, long lineno) {
  double re = parse_double(ss, lineno);
  double im = field == Header::Field::cmplx ? parse_double(ss, lineno) : 0.0;
  return {re, im};
}

std::string format_value(Complex v, bool complex_field) {
  char buf[64];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%.17g", v.real());
  out = buf;
  if (complex_field) {
    std::snprintf(buf, sizeof(buf), " %.17g", v.imag());
    out += buf;
  }
  return out;
}

}  // namespace

std::variant<Matrix, SparseMatrix> mm_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("mm_read: cannot open " + path);

  long lineno = 0;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++lineno;
  Header h = parse_header(line, lineno);

  if (!next_data_line(in, line, lineno)) throw ParseError("missing size line", lineno);
  std::istringstream size_ss(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(size_ss >> rows >> cols)) throw ParseError("malformed size line", lineno);
  if (h.coordinate && !(size_ss >> nnz)) throw ParseError("coordinate size line needs nnz", lineno);
  if (rows < 0 || cols < 0 || nnz < 0) throw ParseError("negative dimension", lineno);

  if (h.coordinate) {
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(static_cast<size_t>(nnz));
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line, lineno)) throw ParseError("unexpected end of file", lineno);
      std::istringstream ss(line);
      long i, j;
      if (!(ss >> i >> j)) throw ParseError("malformed coordinate entry", lineno);
      if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("index out of bounds", lineno);
      trips.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), parse_value(ss, h.field, lineno));
    }
    SparseMatrix M(rows, cols);
    M.setFromTriplets(trips.begin(), trips.end(),
                      [&](const Complex&, const Complex&) -> Complex {
                        throw ParseError("duplicate (row, col) entry", lineno);
                      });
    M.makeCompressed();
    return M;
  }

  Matrix M(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) {
      if (!next_data_line(in, line, lineno)) throw ParseError("unexpected end of file", lineno);
      std::istringstream ss(line);
      M(i, j) = parse_value(ss, h.field, lineno);
    }
  return M;
}

Matrix mm_read_dense(const std::string& path) {
  auto v = mm_read(path);
  if (std::holds_alternative<Matrix>(v)) return std::get<Matrix>(v);
  return Matrix(std::get<SparseMatrix>(v));
}

SparseMatrix mm_read_sparse(const std::string& path) {
  auto v = mm_read(path);
  if (std::holds_alternative<SparseMatrix>(v)) return std::get<SparseMatrix>(v);
  return std::get<Matrix>(v).sparseView();
}

void mm_write(const std::string& path, const Matrix& M) {
  std::ofstream out(path);
  if (!out) throw Error("mm_write: cannot open " + path);
  bool cplx = false;
  for (Index j = 0; j < M.cols() && !cplx; ++j)
    for (Index i = 0; i < M.rows(); ++i)
      if (M(i, j).imag() != 0.0) {
        cplx = true;
        break;
      }
  out << "%%MatrixMarket matrix array " << (cplx ? "complex" : "real") << " general\n";
  out << M.rows() << " " << M.cols() << "\n";
  for (Index j = 0; j < M.cols(); ++j)
    for (Index i = 0; i < M.rows(); ++i) out << format_value(M(i, j), cplx) << "\n";
  if (!out) throw Error("mm_write: write failed for " + path);
}

void mm_write(const std::string& path, const SparseMatrix& M) {
  std::ofstream out(path);
  if (!out) throw Error("mm_write: cannot open " + path);
  bool cplx = false;
  for (Index k = 0; k < M.outerSize() && !cplx; ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
      if (it.value().imag() != 0.0) {
        cplx = true;
        break;
      }
  out << "%%MatrixMarket matrix coordinate " << (cplx ? "complex" : "real") << " general\n";
  out << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
  for (Index k = 0; k < M.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(M, k); it; ++it)
      out << (it.row() + 1) << " " << (it.col() + 1) << " " << format_value(it.value(), cplx) << "\n";
  if (!out) throw Error("mm_write: write failed for " + path);
}

}  // namespace gsma
