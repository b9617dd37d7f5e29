#include "polydisk/simd/kernels.hpp"

namespace polydisk::simd {
namespace {

// Explicit real arithmetic: std::complex operator* goes through the
// NaN-recovering libgcc path, which is both slow and unnecessary here.

void cgemm_scalar(std::size_t m, std::size_t n, std::size_t k, const Complex* a, const Complex* b, Complex* c) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = reinterpret_cast<double*>(c + i * n);
    for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const double* brow = reinterpret_cast<const double*>(b + p * n);
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += ar * br - ai * bi;
        crow[2 * j + 1] += ar * bi + ai * br;
      }
    }
  }
}

void caxpy_scalar(std::size_t n, Complex alpha, const Complex* x, Complex* y) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  for (std::size_t j = 0; j < n; ++j) {
    const double xr = xd[2 * j];
    const double xi = xd[2 * j + 1];
    yd[2 * j] += ar * xr - ai * xi;
    yd[2 * j + 1] += ar * xi + ai * xr;
  }
}

Complex cdotc_scalar(std::size_t n, const Complex* x, const Complex* y) {
  double re = 0.0;
  double im = 0.0;
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  for (std::size_t j = 0; j < n; ++j) {
    const double xr = xd[2 * j];
    const double xi = xd[2 * j + 1];
    const double yr = yd[2 * j];
    const double yi = yd[2 * j + 1];
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::scalar, &cgemm_scalar, &caxpy_scalar, &cdotc_scalar};
}  // namespace detail

}  // namespace polydisk::simd
