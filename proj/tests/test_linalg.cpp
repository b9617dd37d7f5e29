#include <doctest.h>

#include <cmath>

#include "polydisk/cmatrix.hpp"
#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"
#include "support.hpp"

using namespace polydisk;
using testing_support::random_with_norm;

TEST_CASE("zero-sized matrices act as empty maps") {
  const CMatrix a(0, 3);
  const CMatrix b(3, 0);
  CHECK((b * a).rows() == 3);
  CHECK((b * a).cols() == 3);
  CHECK(max_abs(b * a) == 0.0);
  CHECK((a * b).rows() == 0);
  CHECK(rank_tol(a, 1e-9) == 0);
  CHECK(kernel_matrix(a, 1e-9).cols() == 3);
}

TEST_CASE("rank, kernel and commutation") {
  CHECK(rank_tol(CMatrix(3, 3), 1e-9) == 0);
  CHECK(commute_residual(CMatrix{{1.0, 0.0}, {0.0, 2.0}}, CMatrix{{3.0, 0.0}, {0.0, 4.0}}) == 0.0);

  const auto k = kernel_basis(CMatrix{{1.0, 1.0}, {1.0, 1.0}}, 1e-9);
  REQUIRE(k.size() == 1);
  // Direct computation: the kernel is spanned by (1, -1) / sqrt 2, up to phase.
  const Complex ratio = k[0][1] / k[0][0];
  CHECK(std::abs(ratio + 1.0) < 1e-12);
  CHECK(std::abs(std::norm(k[0][0]) + std::norm(k[0][1]) - 1.0) < 1e-12);

  std::mt19937_64 rng(1);
  const CMatrix a = random_with_norm(4, 2.0, rng);
  const CMatrix b = random_with_norm(4, 3.0, rng);
  CHECK(commute_residual(a, b) == doctest::Approx(commute_residual(b, a)).epsilon(1e-12));

  // Rank of a product of thin factors.
  const CMatrix low = testing_support::random_with_norm(5, 1.0, rng).columns(0, 2) *
                      testing_support::random_with_norm(5, 1.0, rng).block(0, 0, 2, 5);
  CHECK(rank_tol(low, 1e-9) == 2);
  const CMatrix kl = kernel_matrix(low, 1e-9);
  CHECK(kl.cols() == 3);
  CHECK(max_abs(low * kl) < 1e-12);
  CHECK(max_abs(kl.adjoint() * kl - CMatrix::identity(3)) < 1e-12);
}

TEST_CASE("solve_intertwiners") {
  const CMatrix i2 = CMatrix::identity(2);
  const CMatrix d12{{1.0, 0.0}, {0.0, 2.0}};
  const CMatrix d34{{3.0, 0.0}, {0.0, 4.0}};
  const IntertwinerPair p1[] = {{i2, i2}};
  CHECK(solve_intertwiners(p1, 1e-9).size() == 4);
  const IntertwinerPair p2[] = {{d12, d12}};
  const auto diag = solve_intertwiners(p2, 1e-9);
  CHECK(diag.size() == 2);
  for (const auto& x : diag) {
    CHECK(std::abs(x(0, 1)) < 1e-12);
    CHECK(std::abs(x(1, 0)) < 1e-12);
  }
  const IntertwinerPair p3[] = {{d12, d34}};
  CHECK(solve_intertwiners(p3, 1e-9).empty());

  // Rectangular: X (2x1) with X [a] = Q X.
  const IntertwinerPair p4[] = {{CMatrix::scalar(2.0), d12}};
  const auto rect = solve_intertwiners(p4, 1e-9);
  REQUIRE(rect.size() == 1);
  CHECK(std::abs(rect[0](0, 0)) < 1e-12);
  CHECK(std::abs(std::abs(rect[0](1, 0)) - 1.0) < 1e-12);

  const IntertwinerPair bad[] = {{d12, i2}, {CMatrix::identity(3), i2}};
  CHECK_THROWS_AS(solve_intertwiners(bad, 1e-9), ShapeError);
}

TEST_CASE("inverse reports singular input with a condition estimate") {
  const CMatrix sing{{1.0, 2.0}, {2.0, 4.0}};
  try {
    (void)inverse(sing);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.condition_estimate() > 1e12);
  }
  std::mt19937_64 rng(2);
  const CMatrix a = CMatrix::identity(4) + random_with_norm(4, 0.5, rng);
  CHECK(max_abs(a * inverse(a) - CMatrix::identity(4)) < 1e-12);
}

TEST_CASE("schur form reconstructs the input") {
  std::mt19937_64 rng(3);
  const CMatrix a = random_with_norm(6, 3.0, rng);
  const auto s = schur(a);
  CHECK(frobenius_norm(s.unitary * s.triangular * s.unitary.adjoint() - a) < 1e-12);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(s.triangular(i, j) == Complex(0.0));
}

TEST_CASE("non-finite entries are rejected") {
  CMatrix a = CMatrix::identity(2);
  a(0, 1) = std::nan("");
  CHECK_FALSE(all_finite(a));
  CHECK_THROWS_AS(svd(a), ShapeError);
}
