#include <doctest.h>

#include <random>
#include <vector>

#include "polydisk/simd/kernels.hpp"

using namespace polydisk::simd;

namespace {

std::vector<Complex> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& z : v) {
    const double re = nd(rng);
    z = {re, nd(rng)};
  }
  return v;
}

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Plain triple loop with std::complex arithmetic, independent of both tables.
std::vector<Complex> naive_gemm(std::size_t m, std::size_t n, std::size_t k, const std::vector<Complex>& a,
                                const std::vector<Complex>& b) {
  std::vector<Complex> c(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t p = 0; p < k; ++p) c[i * n + j] += a[i * k + p] * b[p * n + j];
  return c;
}

}  // namespace

TEST_CASE("scalar kernels match a naive reference") {
  std::mt19937_64 rng(11);
  const auto& s = table(Isa::scalar);
  for (std::size_t m : {1u, 3u, 7u})
    for (std::size_t n : {1u, 2u, 5u, 9u})
      for (std::size_t k : {1u, 4u, 6u}) {
        const auto a = random_vector(m * k, rng);
        const auto b = random_vector(k * n, rng);
        std::vector<Complex> c(m * n, Complex(99.0, 99.0));
        s.cgemm(m, n, k, a.data(), b.data(), c.data());
        CHECK(max_diff(c, naive_gemm(m, n, k, a, b)) < 1e-12);
      }
}

TEST_CASE("every supported ISA agrees with the scalar reference") {
  std::mt19937_64 rng(5);
  const auto& ref = table(Isa::scalar);
  for (Isa isa : {Isa::scalar, Isa::avx2}) {
    if (!supported(isa)) {
      MESSAGE("skipping unsupported ISA " << isa_name(isa));
      continue;
    }
    const auto& t = table(isa);
    CHECK(t.isa == isa);
    for (std::size_t m : {1u, 2u, 5u, 8u})
      for (std::size_t n : {1u, 2u, 3u, 4u, 7u, 16u, 17u})
        for (std::size_t k : {0u, 1u, 3u, 8u}) {
          const auto a = random_vector(m * k, rng);
          const auto b = random_vector(k * n, rng);
          std::vector<Complex> c1(m * n), c2(m * n);
          ref.cgemm(m, n, k, a.data(), b.data(), c1.data());
          t.cgemm(m, n, k, a.data(), b.data(), c2.data());
          CHECK(max_diff(c1, c2) <= 1e-13 * (1.0 + static_cast<double>(k)));
        }
    for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 8u, 33u}) {
      const auto x = random_vector(n, rng);
      auto y1 = random_vector(n, rng);
      auto y2 = y1;
      const Complex alpha{0.3, -1.7};
      ref.caxpy(n, alpha, x.data(), y1.data());
      t.caxpy(n, alpha, x.data(), y2.data());
      CHECK(max_diff(y1, y2) <= 1e-14);
      const Complex d1 = ref.cdotc(n, x.data(), y1.data());
      const Complex d2 = t.cdotc(n, x.data(), y1.data());
      CHECK(std::abs(d1 - d2) <= 1e-13 * (1.0 + static_cast<double>(n)));
    }
  }
}

TEST_CASE("gemm results do not depend on the column position") {
  // The vector body and the scalar tail must round identically, so a column
  // gives the same bits whether it lands in a SIMD lane or in the tail.
  if (!supported(Isa::avx2)) return;
  const auto& t = table(Isa::avx2);
  std::mt19937_64 rng(3);
  const std::size_t m = 3, k = 5;
  const auto a = random_vector(m * k, rng);
  const auto col = random_vector(k, rng);
  for (std::size_t n = 1; n <= 9; ++n) {
    for (std::size_t pos = 0; pos < n; ++pos) {
      std::vector<Complex> b(k * n, Complex(0.0));
      for (std::size_t p = 0; p < k; ++p) b[p * n + pos] = col[p];
      std::vector<Complex> c(m * n), c1(m);
      t.cgemm(m, n, k, a.data(), b.data(), c.data());
      t.cgemm(m, 1, k, a.data(), col.data(), c1.data());
      for (std::size_t i = 0; i < m; ++i) CHECK(c[i * n + pos] == c1[i]);
    }
  }
}

TEST_CASE("active table is a supported one") {
  const auto& a = active();
  CHECK(supported(a.isa));
}
