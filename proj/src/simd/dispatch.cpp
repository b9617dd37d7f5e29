#include <cstdlib>
#include <string>

#include "polydisk/errors.hpp"
#include "polydisk/simd/kernels.hpp"

namespace polydisk::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(POLYDISK_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw DomainError("instruction set '" + std::string(isa_name(isa)) + "' is not available on this machine");
  }
#if defined(POLYDISK_WITH_AVX2)
  if (isa == Isa::avx2) return detail::kAvx2Table;
#endif
  return detail::kScalarTable;
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("POLYDISK_ISA")) {
    const std::string name(forced);
    if (name == "scalar") return table(Isa::scalar);
    if (name == "avx2" && supported(Isa::avx2)) return table(Isa::avx2);
  }
  if (supported(Isa::avx2)) return table(Isa::avx2);
  return table(Isa::scalar);
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace polydisk::simd
