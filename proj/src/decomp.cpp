#include "polydisk/decomp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "polydisk/errors.hpp"

namespace polydisk {

namespace {

using EMatrix = Eigen::MatrixXcd;

EMatrix to_eigen(const CMatrix& m) {
  EMatrix out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

CMatrix from_eigen(const EMatrix& m) {
  CMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

void require_finite(const CMatrix& m, const char* op) {
  if (!all_finite(m)) throw ShapeError(std::string(op) + ": matrix has non-finite entries");
}

}  // namespace

SingularValueDecomposition svd(const CMatrix& m) {
  require_finite(m, "svd");
  SingularValueDecomposition out;
  if (m.cols() == 0) {
    out.u = CMatrix(m.rows(), 0);
    out.v = CMatrix(0, 0);
    return out;
  }
  if (m.rows() == 0) {
    out.u = CMatrix(0, 0);
    out.v = CMatrix::identity(m.cols());
    return out;
  }
  Eigen::JacobiSVD<EMatrix> solver(to_eigen(m), Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& s = solver.singularValues();
  out.values.assign(s.data(), s.data() + s.size());
  out.u = from_eigen(solver.matrixU());
  out.v = from_eigen(solver.matrixV());
  return out;
}

double spectral_norm(const CMatrix& m) {
  if (m.empty()) return 0.0;
  const auto s = svd(m);
  return s.values.empty() ? 0.0 : s.values.front();
}

double min_singular_value(const CMatrix& m) {
  if (m.empty()) return 0.0;
  return svd(m).values.back();
}

namespace {

std::size_t rank_from_values(const std::vector<double>& values, double tol, double floor = 0.0) {
  if (values.empty() || values.front() == 0.0) return 0;
  const double cut = tol * std::max(values.front(), floor);
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double s) { return s >= cut; }));
}

}  // namespace

std::size_t rank_tol(const CMatrix& m, double tol) {
  if (tol <= 0.0) throw DomainError("rank tolerance must be positive");
  if (m.empty()) return 0;
  return rank_from_values(svd(m).values, tol);
}

CMatrix kernel_matrix(const CMatrix& m, double tol, double scale_floor) {
  if (tol <= 0.0) throw DomainError("rank tolerance must be positive");
  const std::size_t n = m.cols();
  if (m.rows() == 0 || n == 0) return CMatrix::identity(n);
  const auto s = svd(m);
  const std::size_t r = rank_from_values(s.values, tol, scale_floor);
  return s.v.columns(r, n - r);
}

std::vector<std::vector<Complex>> kernel_basis(const CMatrix& m, double tol) {
  const CMatrix k = kernel_matrix(m, tol);
  std::vector<std::vector<Complex>> out;
  for (std::size_t j = 0; j < k.cols(); ++j) out.push_back(k.column(j));
  return out;
}

CMatrix range_basis(const CMatrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return CMatrix(m.rows(), 0);
  const auto s = svd(m);
  const std::size_t r = rank_from_values(s.values, tol);
  return s.u.columns(0, r);
}

CMatrix orthogonal_complement(const CMatrix& basis) {
  const std::size_t n = basis.rows();
  if (basis.cols() == 0) return CMatrix::identity(n);
  // Null space of basis^*: exact rank is known, so take the trailing columns.
  const CMatrix adj = basis.adjoint();
  const auto s = svd(adj);
  const std::size_t r = std::min(basis.cols(), n);
  return s.v.columns(r, n - r);
}

double commute_residual(const CMatrix& a, const CMatrix& b) {
  if (!a.is_square() || !same_shape(a, b)) throw ShapeError("commute_residual: need equal square shapes");
  const double scale = std::max(1.0, frobenius_norm(a) * frobenius_norm(b));
  return frobenius_norm(a * b - b * a) / scale;
}

std::vector<CMatrix> solve_intertwiners(std::span<const IntertwinerPair> pairs, double tol) {
  if (pairs.empty()) throw ShapeError("solve_intertwiners: no constraints given");
  const std::size_t a = pairs.front().source.rows();
  const std::size_t b = pairs.front().target.rows();
  for (const auto& p : pairs) {
    if (!p.source.is_square() || !p.target.is_square() || p.source.rows() != a || p.target.rows() != b) {
      throw ShapeError("solve_intertwiners: inconsistent constraint shapes");
    }
  }
  const std::size_t unknowns = a * b;  // X(r, c) -> r * a + c
  if (unknowns == 0) return {};
  CMatrix system(pairs.size() * unknowns, unknowns);
  std::size_t row = 0;
  for (const auto& p : pairs) {
    // (X P - Q X)(r, c) = sum_j X(r, j) P(j, c) - sum_j Q(r, j) X(j, c)
    for (std::size_t r = 0; r < b; ++r) {
      for (std::size_t c = 0; c < a; ++c, ++row) {
        for (std::size_t j = 0; j < a; ++j) system(row, r * a + j) += p.source(j, c);
        for (std::size_t j = 0; j < b; ++j) system(row, j * a + c) -= p.target(r, j);
      }
    }
  }
  const CMatrix k = kernel_matrix(system, tol);
  std::vector<CMatrix> out;
  for (std::size_t q = 0; q < k.cols(); ++q) {
    CMatrix x(b, a);
    for (std::size_t r = 0; r < b; ++r)
      for (std::size_t c = 0; c < a; ++c) x(r, c) = k(r * a + c, q);
    out.push_back(std::move(x));
  }
  return out;
}

CMatrix inverse(const CMatrix& a, double tol) {
  if (!a.is_square()) throw ShapeError("inverse: matrix is not square");
  if (a.rows() == 0) return a;
  require_finite(a, "inverse");
  const auto s = svd(a);
  if (s.values.back() <= tol * s.values.front()) {
    const double cond = s.values.back() > 0.0 ? s.values.front() / s.values.back() : INFINITY;
    throw NumericalError("matrix is singular to working tolerance (condition estimate " + std::to_string(cond) + ")",
                         cond);
  }
  const EMatrix inv = to_eigen(a).fullPivLu().inverse();
  return from_eigen(inv);
}

std::vector<Complex> eigenvalues(const CMatrix& a) {
  if (!a.is_square()) throw ShapeError("eigenvalues: matrix is not square");
  if (a.rows() == 0) return {};
  const auto t = schur(a).triangular;
  std::vector<Complex> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = t(i, i);
  return out;
}

SchurForm schur(const CMatrix& a) {
  if (!a.is_square()) throw ShapeError("schur: matrix is not square");
  require_finite(a, "schur");
  if (a.rows() == 0) return {CMatrix(0, 0), CMatrix(0, 0)};
  Eigen::ComplexSchur<EMatrix> solver(to_eigen(a));
  if (solver.info() != Eigen::Success) throw NumericalError("complex Schur decomposition did not converge");
  SchurForm out{from_eigen(solver.matrixU()), from_eigen(solver.matrixT())};
  // Eigen leaves rounding noise below the diagonal untouched; clear it.
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) out.triangular(i, j) = 0.0;
  return out;
}

}  // namespace polydisk
