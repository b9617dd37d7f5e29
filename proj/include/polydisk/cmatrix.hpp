#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace polydisk {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. Zero-sized shapes (0 x n, n x 0) are
/// legal and act as empty linear maps.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix identity(std::size_t n);
  static CMatrix scalar(Complex value) { return CMatrix(1, 1, {value}); }
  static CMatrix diagonal(std::span<const Complex> diag);
  /// Matrix whose columns are the given vectors, each of length `rows`.
  static CMatrix from_columns(std::size_t rows, const std::vector<std::vector<Complex>>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  Complex* data() noexcept { return entries_.data(); }
  const Complex* data() const noexcept { return entries_.data(); }
  std::span<const Complex> entries() const noexcept { return entries_; }
  std::span<Complex> entries() noexcept { return entries_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const CMatrix& b);
  std::vector<Complex> column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> values);
  /// Columns [first, first + count).
  CMatrix columns(std::size_t first, std::size_t count) const { return block(0, first, rows_, count); }

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator-(CMatrix a) { return a *= -1.0; }
  /// Matrix product through the active SIMD kernel.
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

double frobenius_norm(const CMatrix& m);
double max_abs(const CMatrix& m);
bool all_finite(const CMatrix& m);
bool same_shape(const CMatrix& a, const CMatrix& b);

/// A - s*I for square A.
CMatrix shifted(const CMatrix& a, Complex s);
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix block_diag(const CMatrix& a, const CMatrix& b);
CMatrix hstack(const CMatrix& a, const CMatrix& b);

/// ||a - b||_F / max(1, ||a||_F, ||b||_F); shapes must agree.
double scaled_difference(const CMatrix& a, const CMatrix& b);

}  // namespace polydisk
