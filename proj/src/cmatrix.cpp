#include "polydisk/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polydisk/errors.hpp"
#include "polydisk/simd/kernels.hpp"

namespace polydisk {

namespace {

std::string shape_str(const CMatrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (!same_shape(a, b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw ShapeError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " given " +
                     std::to_string(entries_.size()) + " entries");
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix literal");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::from_columns(std::size_t rows, const std::vector<std::vector<Complex>>& columns) {
  CMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) throw ShapeError("block out of range of " + shape_str(*this));
  CMatrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(row0 + i, col0 + j);
  return out;
}

void CMatrix::set_block(std::size_t row0, std::size_t col0, const CMatrix& b) {
  if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_) throw ShapeError("set_block out of range of " + shape_str(*this));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(row0 + i, col0 + j) = b(i, j);
}

std::vector<Complex> CMatrix::column(std::size_t j) const {
  std::vector<Complex> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void CMatrix::set_column(std::size_t j, std::span<const Complex> values) {
  if (values.size() != rows_ || j >= cols_) throw ShapeError("set_column: bad column or length");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& e : entries_) e *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("product: " + shape_str(a) + " * " + shape_str(b));
  CMatrix c(a.rows(), b.cols());
  if (c.empty()) return c;
  simd::active().cgemm(a.rows(), b.cols(), a.cols(), a.data(), b.data(), c.data());
  return c;
}

double frobenius_norm(const CMatrix& m) {
  double scale = max_abs(m);
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& e : m.entries()) sum += std::norm(e / scale);
  return scale * std::sqrt(sum);
}

double max_abs(const CMatrix& m) {
  double out = 0.0;
  for (const auto& e : m.entries()) out = std::max(out, std::abs(e));
  return out;
}

bool all_finite(const CMatrix& m) {
  return std::all_of(m.entries().begin(), m.entries().end(),
                     [](const Complex& e) { return std::isfinite(e.real()) && std::isfinite(e.imag()); });
}

bool same_shape(const CMatrix& a, const CMatrix& b) { return a.rows() == b.rows() && a.cols() == b.cols(); }

CMatrix shifted(const CMatrix& a, Complex s) {
  if (!a.is_square()) throw ShapeError("shifted: matrix is not square");
  CMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) out(i, i) -= s;
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) out(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return out;
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

CMatrix hstack(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw ShapeError("hstack: row mismatch");
  CMatrix out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

double scaled_difference(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "scaled_difference");
  const double scale = std::max({1.0, frobenius_norm(a), frobenius_norm(b)});
  return frobenius_norm(a - b) / scale;
}

}  // namespace polydisk
