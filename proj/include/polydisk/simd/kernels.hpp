#pragma once

// Complex double-precision inner kernels. A scalar reference implementation is
// always available; an AVX2/FMA variant is compiled on x86-64 and selected at
// runtime when the CPU supports it. POLYDISK_ISA=scalar forces the reference.
//
// All matrices are dense row-major arrays of std::complex<double>.

#include <complex>
#include <cstddef>
#include <string_view>

namespace polydisk::simd {

using Complex = std::complex<double>;

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  /// c[m x n] = a[m x k] * b[k x n]; c must not alias a or b.
  void (*cgemm)(std::size_t m, std::size_t n, std::size_t k, const Complex* a, const Complex* b, Complex* c);
  /// y[0..n) += alpha * x[0..n)
  void (*caxpy)(std::size_t n, Complex alpha, const Complex* x, Complex* y);
  /// sum_i conj(x[i]) * y[i]
  Complex (*cdotc)(std::size_t n, const Complex* x, const Complex* y);
};

bool supported(Isa isa);

/// Kernel table for a specific ISA; throws DomainError when unsupported.
const KernelTable& table(Isa isa);

/// Table chosen once per process from CPU features and POLYDISK_ISA.
const KernelTable& active();

namespace detail {
extern const KernelTable kScalarTable;
#if defined(POLYDISK_WITH_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace polydisk::simd
