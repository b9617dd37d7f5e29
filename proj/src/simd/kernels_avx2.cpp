#include <immintrin.h>

#include <cmath>

#include "polydisk/simd/kernels.hpp"

namespace polydisk::simd {
namespace {

// One __m256d holds two complex numbers [re0, im0, re1, im1]. The product
// a * b is formed as fmaddsub(a.re, b, a.im * swap(b)); the scalar tails below
// reproduce that rounding exactly, so a column's result does not depend on
// whether it falls in the vector body or the tail.

inline void cmul_tail(double ar, double ai, double br, double bi, double& re, double& im) {
  re = std::fma(ar, br, -(ai * bi));
  im = std::fma(ar, bi, ai * br);
}

void cgemm_avx2(std::size_t m, std::size_t n, std::size_t k, const Complex* a, const Complex* b, Complex* c) {
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = reinterpret_cast<double*>(c + i * n);
    for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const __m256d var = _mm256_set1_pd(ar);
      const __m256d vai = _mm256_set1_pd(ai);
      const double* brow = reinterpret_cast<const double*>(b + p * n);
      for (std::size_t q = 0; q < pairs; ++q) {
        const __m256d vb = _mm256_loadu_pd(brow + 4 * q);
        const __m256d sw = _mm256_permute_pd(vb, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(var, vb, _mm256_mul_pd(vai, sw));
        _mm256_storeu_pd(crow + 4 * q, _mm256_add_pd(_mm256_loadu_pd(crow + 4 * q), prod));
      }
      if (n % 2) {
        const std::size_t j = n - 1;
        double re, im;
        cmul_tail(ar, ai, brow[2 * j], brow[2 * j + 1], re, im);
        crow[2 * j] += re;
        crow[2 * j + 1] += im;
      }
    }
  }
}

void caxpy_avx2(std::size_t n, Complex alpha, const Complex* x, Complex* y) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  const __m256d var = _mm256_set1_pd(ar);
  const __m256d vai = _mm256_set1_pd(ai);
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const std::size_t pairs = n / 2;
  for (std::size_t q = 0; q < pairs; ++q) {
    const __m256d vx = _mm256_loadu_pd(xd + 4 * q);
    const __m256d sw = _mm256_permute_pd(vx, 0x5);
    const __m256d prod = _mm256_fmaddsub_pd(var, vx, _mm256_mul_pd(vai, sw));
    _mm256_storeu_pd(yd + 4 * q, _mm256_add_pd(_mm256_loadu_pd(yd + 4 * q), prod));
  }
  if (n % 2) {
    const std::size_t j = n - 1;
    double re, im;
    cmul_tail(ar, ai, xd[2 * j], xd[2 * j + 1], re, im);
    yd[2 * j] += re;
    yd[2 * j + 1] += im;
  }
}

Complex cdotc_avx2(std::size_t n, const Complex* x, const Complex* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();  // [xr*yr, xi*yi, ...]
  __m256d acc_im = _mm256_setzero_pd();  // [xr*yi, xi*yr, ...]
  const std::size_t pairs = n / 2;
  for (std::size_t q = 0; q < pairs; ++q) {
    const __m256d vx = _mm256_loadu_pd(xd + 4 * q);
    const __m256d vy = _mm256_loadu_pd(yd + 4 * q);
    acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
    acc_im = _mm256_fmadd_pd(vx, _mm256_permute_pd(vy, 0x5), acc_im);
  }
  alignas(32) double r[4];
  alignas(32) double s[4];
  _mm256_store_pd(r, acc_re);
  _mm256_store_pd(s, acc_im);
  double re = (r[0] + r[1]) + (r[2] + r[3]);
  double im = (s[0] - s[1]) + (s[2] - s[3]);
  if (n % 2) {
    const std::size_t j = n - 1;
    re += xd[2 * j] * yd[2 * j] + xd[2 * j + 1] * yd[2 * j + 1];
    im += xd[2 * j] * yd[2 * j + 1] - xd[2 * j + 1] * yd[2 * j];
  }
  return {re, im};
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{Isa::avx2, &cgemm_avx2, &caxpy_avx2, &cdotc_avx2};
}  // namespace detail

}  // namespace polydisk::simd
