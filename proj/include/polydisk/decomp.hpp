#pragma once

// Toleranced rank/kernel computations and the decompositions the matrix
// functions build on. Backed by Eigen.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "polydisk/cmatrix.hpp"

namespace polydisk {

struct SingularValueDecomposition {
  std::vector<double> values;  // descending, min(m, n) of them
  CMatrix u;                   // m x min(m, n)
  CMatrix v;                   // n x n, full
};

SingularValueDecomposition svd(const CMatrix& m);

double spectral_norm(const CMatrix& m);
double min_singular_value(const CMatrix& m);

/// Number of singular values >= tol * sigma_max (0 for the zero matrix).
std::size_t rank_tol(const CMatrix& m, double tol);

/// Orthonormal basis of the right null space, as columns of an n x k matrix.
/// Singular values below tol * max(sigma_max, scale_floor) count as zero.
CMatrix kernel_matrix(const CMatrix& m, double tol, double scale_floor = 0.0);
std::vector<std::vector<Complex>> kernel_basis(const CMatrix& m, double tol);

/// Orthonormal basis (columns) of the column span of m.
CMatrix range_basis(const CMatrix& m, double tol);

/// Orthonormal basis of the orthogonal complement of span(basis) in C^n,
/// where basis has orthonormal columns.
CMatrix orthogonal_complement(const CMatrix& basis);

/// ||AB - BA||_F / max(1, ||A||_F ||B||_F).
double commute_residual(const CMatrix& a, const CMatrix& b);

/// One constraint X P = Q X of an intertwiner problem.
struct IntertwinerPair {
  CMatrix source;  // P, a x a
  CMatrix target;  // Q, b x b
};

/// Orthonormal (in the Frobenius inner product) basis of
/// { X : b x a | X P_i = Q_i X for all i }.
std::vector<CMatrix> solve_intertwiners(std::span<const IntertwinerPair> pairs, double tol);

/// Inverse of a square matrix; NumericalError when sigma_min <= tol * sigma_max.
CMatrix inverse(const CMatrix& a, double tol = 1e-12);

std::vector<Complex> eigenvalues(const CMatrix& a);

struct SchurForm {
  CMatrix unitary;     // Q
  CMatrix triangular;  // T, with A = Q T Q^*
};

SchurForm schur(const CMatrix& a);

}  // namespace polydisk
