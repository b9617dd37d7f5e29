#pragma once

// Submodule search over C with floating point: MeatAxe-style simplicity test,
// Jordan-Holder series, semisimplification and isomorphism testing. All
// randomized steps are driven by an explicit seed.
//
// At fiber scale every nonzero sub-object has the same normalized Hilbert
// polynomial, so stability coincides with simplicity.

#include <cstdint>
#include <string>
#include <vector>

#include "polydisk/presentation.hpp"

namespace polydisk {

struct AlgebraOptions {
  std::uint64_t seed = 1;
  double rank_tol = 1e-6;  // kernels, spinning
  double tol = 1e-8;       // structural residuals, intertwiner kernels
  int rounds = 30;         // random algebra elements tried before giving up
};

enum class SimplicityStatus { simple, not_simple, inconclusive };

const char* to_string(SimplicityStatus s);

struct SimplicityResult {
  SimplicityStatus status = SimplicityStatus::inconclusive;
  SubspaceFamily witness;  // proper nonzero submodule when not_simple
  std::string detail;
};

SimplicityResult is_simple(const LinearPresentation& p, const AlgebraOptions& opt = {});

struct StabilityResult {
  bool stable = false;
  SimplicityStatus status = SimplicityStatus::inconclusive;
  std::string detail;
};

StabilityResult is_stable(const PreDModule& e, const AlgebraOptions& opt = {});
StabilityResult is_stable(const VerdierObject& v, const AlgebraOptions& opt = {});

enum class IsoStatus { yes, no, probably_not };

const char* to_string(IsoStatus s);

struct IsoResult {
  IsoStatus status = IsoStatus::probably_not;
  std::vector<CMatrix> intertwiner;  // per node, X_A : W_A -> W'_A, when yes
  std::string invariant;             // separating invariant when no
};

/// Throws DomainError when kinds or contexts differ.
IsoResult isomorphic(const LinearPresentation& a, const LinearPresentation& b, const AlgebraOptions& opt = {});

struct FactorClass {
  Hypercube object;
  std::size_t multiplicity = 0;
};

struct JordanHolderReport {
  bool decided = false;
  std::string detail;
  ObjectKind kind = ObjectKind::pre_d_module;
  Filtration filtration;                      // grades 0..length, in the input's coordinates
  std::vector<Hypercube> composition_factors;  // F_j / F_{j-1}, in series order
  std::vector<FactorClass> factors;            // grouped up to isomorphism
  std::vector<std::size_t> dims;
};

JordanHolderReport jordan_holder(const LinearPresentation& p, const AlgebraOptions& opt = {});

/// Direct sum of the composition factors. Throws InconclusiveError when the
/// series could not be decided.
Hypercube semisimplify(const LinearPresentation& p, const AlgebraOptions& opt = {});

/// Same factor multiset up to isomorphism.
struct SEquivalenceResult {
  bool decided = false;
  bool equivalent = false;
  std::string detail;
};
SEquivalenceResult s_equivalent(const JordanHolderReport& a, const JordanHolderReport& b, const AlgebraOptions& opt = {});

}  // namespace polydisk
