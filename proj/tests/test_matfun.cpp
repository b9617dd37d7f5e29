#include <doctest.h>

#include <cmath>

#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"
#include "polydisk/matfun.hpp"
#include "support.hpp"

using namespace polydisk;
using namespace testing_support;

TEST_CASE("scalar phi") {
  CHECK(std::abs(phi(0.0) - kTwoPiI) < 1e-15);
  CHECK(std::abs(phi(1.0)) < 1e-14);
  CHECK(std::abs(phi(-3.0)) < 1e-14);
  for (Complex z : {Complex(1e-9, 0.0), Complex(0.3, 0.1), Complex(2.5, -1.0), Complex(1e-4, 1e-4)}) {
    const Complex direct = (std::exp(kTwoPiI * z) - 1.0) / z;
    CHECK(std::abs(phi(z) - direct) <= 1e-7 * std::abs(direct));
  }
}

TEST_CASE("phi_matrix on small cases") {
  CHECK(std::abs(phi_matrix(CMatrix::scalar(0.0))(0, 0) - kTwoPiI) < 1e-14);
  CHECK(std::abs(phi_matrix(CMatrix::scalar(1.0))(0, 0)) < 1e-14);

  // Nilpotent Jordan block: phi(N) = phi(0) I + phi'(0) N with phi'(0) = (2 pi i)^2 / 2.
  const CMatrix jordan{{0.0, 1.0}, {0.0, 0.0}};
  const CMatrix p = phi_matrix(jordan);
  CHECK(std::abs(p(0, 0) - kTwoPiI) < 1e-13);
  CHECK(std::abs(p(1, 1) - kTwoPiI) < 1e-13);
  CHECK(std::abs(p(1, 0)) < 1e-13);
  CHECK(std::abs(p(0, 1) - kTwoPiI * kTwoPiI / 2.0) < 1e-12);
  CHECK(frobenius_norm(p - phi_oracle(jordan)) < 1e-10 * (1.0 + frobenius_norm(p)));

  // Jordan block at a nonzero integer: phi(1) = 0, phi'(1) = 2 pi i.
  const CMatrix j1{{1.0, 1.0}, {0.0, 1.0}};
  const CMatrix p1 = phi_matrix(j1);
  CHECK(std::abs(p1(0, 0)) < 1e-12);
  CHECK(std::abs(p1(0, 1) - kTwoPiI) < 1e-12);

  CHECK_THROWS_AS(phi_matrix(CMatrix(2, 3)), ShapeError);
  CHECK(phi_matrix(CMatrix(0, 0)).rows() == 0);
}

TEST_CASE("phi identity and oracle agreement on random inputs") {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const CMatrix theta = random_with_norm(n, uniform(rng, 0.1, 4.0), rng);
    const CMatrix p = phi_matrix(theta);
    const CMatrix e = exp_2pii(theta);
    const double scale = 1.0 + frobenius_norm(e);
    CHECK(frobenius_norm(p * theta - (e - CMatrix::identity(n))) <= 1e-10 * scale);
    CHECK(frobenius_norm(theta * p - (e - CMatrix::identity(n))) <= 1e-10 * scale);
    const CMatrix oracle = phi_oracle(theta);
    CHECK(frobenius_norm(p - oracle) <= 1e-10 * (1.0 + frobenius_norm(oracle)));
    CHECK(frobenius_norm(e - exp_oracle(theta)) <= 1e-10 * scale);
  }
}

TEST_CASE("phi is singular exactly at nonzero integer eigenvalues") {
  const std::vector<Complex> good{0.0, 0.5, Complex(2.0, 0.1), -0.3};
  const std::vector<Complex> bad{0.0, 0.5, 2.0};
  CHECK(min_singular_value(phi_matrix(CMatrix::diagonal(good))) > 1e-3);
  CHECK(min_singular_value(phi_matrix(CMatrix::diagonal(bad))) < 1e-12);
}

TEST_CASE("clustered and confluent spectra") {
  std::mt19937_64 rng(4);
  // Nearly equal eigenvalues and a derogatory block.
  for (const std::vector<Complex>& lambdas :
       {std::vector<Complex>{0.3, 0.3 + 1e-9, 0.3 - 1e-9, 1.0}, std::vector<Complex>{1.0, 1.0, 2.0, 2.0 + 1e-12},
        std::vector<Complex>{-1.0, 0.0, 1.0, 2.0, 3.0}}) {
    const CMatrix theta = random_with_spectrum(lambdas, rng);
    const CMatrix oracle = phi_oracle(theta);
    CHECK(frobenius_norm(phi_matrix(theta) - oracle) <= 1e-9 * (1.0 + frobenius_norm(oracle)));
  }
}

TEST_CASE("block-diagonal inputs evaluate block by block") {
  std::mt19937_64 rng(6);
  const CMatrix a = random_with_norm(2, 1.5, rng);
  const CMatrix b = random_with_norm(3, 2.5, rng);
  CHECK(phi_matrix(block_diag(a, b)) == block_diag(phi_matrix(a), phi_matrix(b)));
  CHECK(exp_2pii(block_diag(a, b)) == block_diag(exp_2pii(a), exp_2pii(b)));
}

TEST_CASE("fundamental domain reduction") {
  const FundamentalDomain d0{0.0};
  CHECK(d0.contains(0.0));
  CHECK_FALSE(d0.contains(1.0));
  CHECK(d0.reduce(Complex(2.25, 1.0)) == Complex(0.25, 1.0));
  CHECK(d0.reduce(Complex(-0.75, 0.0)) == Complex(0.25, 0.0));
  CHECK(d0.reduce(1.0) == Complex(0.0));
  const FundamentalDomain dm{-0.5};
  CHECK(dm.reduce(Complex(0.75, 0.0)) == Complex(-0.25, 0.0));
}

TEST_CASE("principal log examples") {
  CHECK(max_abs(principal_log_over_2pii(CMatrix::identity(2), {})) < 1e-14);
  CHECK(std::abs(principal_log_over_2pii(CMatrix::scalar(Complex(0.0, 1.0)), {})(0, 0) - 0.25) < 1e-14);
  CHECK(std::abs(principal_log_over_2pii(CMatrix::scalar(-1.0), {})(0, 0) - 0.5) < 1e-14);
  CHECK(std::abs(principal_log_over_2pii(CMatrix::scalar(-1.0), {-0.75})(0, 0) + 0.5) < 1e-14);

  // Unipotent Jordan block: log(I + N) / 2 pi i = N / 2 pi i.
  const CMatrix u{{1.0, 1.0}, {0.0, 1.0}};
  const CMatrix lu = principal_log_over_2pii(u, {});
  CHECK(std::abs(lu(0, 1) - 1.0 / kTwoPiI) < 1e-14);
  CHECK(std::abs(lu(0, 0)) < 1e-14);

  CHECK_THROWS_AS(principal_log_over_2pii(CMatrix{{1.0, 0.0}, {0.0, 0.0}}, {}), NumericalError);
  CHECK_THROWS_AS(principal_log_over_2pii(CMatrix(2, 3), {}), ShapeError);
}

TEST_CASE("principal log round trips through the oracle exponential") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    const double sigma = trial % 3 == 0 ? -0.5 : 0.0;
    std::vector<Complex> lambdas;
    for (std::size_t i = 0; i < n; ++i) lambdas.push_back({sigma + uniform(rng, 0.02, 0.98), uniform(rng, -0.4, 0.4)});
    const CMatrix theta0 = random_with_spectrum(lambdas, rng);
    const CMatrix m = exp_oracle(theta0);
    const CMatrix theta = principal_log_over_2pii(m, {sigma});
    CHECK(frobenius_norm(theta - theta0) <= 1e-7);
    CHECK(frobenius_norm(exp_oracle(theta) - m) <= 1e-8 * frobenius_norm(m));
    for (Complex z : eigenvalues(theta)) {
      CHECK(z.real() >= sigma - 1e-10);
      CHECK(z.real() < sigma + 1.0);
    }
  }
}

TEST_CASE("principal log of defective and repeated spectra") {
  std::mt19937_64 rng(9);
  // Jordan block at eigenvalue -1 conjugated, and a repeated eigenvalue i.
  const CMatrix j{{-1.0, 1.0, 0.0}, {0.0, -1.0, 1.0}, {0.0, 0.0, -1.0}};
  const CMatrix g = random_basis_change({3}, rng).front();
  const CMatrix m = g * j * inverse(g);
  const CMatrix theta = principal_log_over_2pii(m, {});
  CHECK(frobenius_norm(exp_oracle(theta) - m) <= 1e-8 * frobenius_norm(m));
  for (Complex z : eigenvalues(theta)) CHECK(std::abs(z - 0.5) < 1e-4);
}
