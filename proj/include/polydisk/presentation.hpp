#pragma once

// Uniform node/arrow presentation of a hypercube object. A sub-object is
// exactly a family of node subspaces closed under every generator.
//   pre-D-module:   Theta[A][k] loops, t and s arrows
//   Verdier object: Mono[A][k] and Mono[A][k]^-1 loops, C and V arrows

#include <cstddef>
#include <vector>

#include "polydisk/hypercube.hpp"
#include "polydisk/predmod.hpp"
#include "polydisk/verdier.hpp"

namespace polydisk {

enum class GeneratorRole { loop, loop_inverse, up, down };

struct Generator {
  Mask source = 0;
  Mask target = 0;
  CMatrix matrix;  // dims[target] x dims[source]
  GeneratorRole role = GeneratorRole::loop;
  Mask stratum = 0;
  int k = 0;
};

struct LinearPresentation {
  ObjectKind kind = ObjectKind::pre_d_module;
  Hypercube cube;
  std::vector<Generator> generators;

  std::size_t node_count() const { return cube.node_count(); }
  std::size_t dim(Mask a) const { return cube.dims[a]; }
  std::size_t total_dim() const { return cube.total_dim(); }
  /// Offset of node a in the concatenated total space.
  std::size_t offset(Mask a) const;
};

LinearPresentation to_presentation(const Hypercube& cube, ObjectKind kind);
inline LinearPresentation to_presentation(const PreDModule& e) { return to_presentation(e.cube, ObjectKind::pre_d_module); }
inline LinearPresentation to_presentation(const VerdierObject& v) { return to_presentation(v.cube, ObjectKind::verdier); }

/// Same nodes, every generator replaced by its adjoint with source/target swapped.
/// Its submodules are the orthogonal complements of the original's.
LinearPresentation adjoint_presentation(const LinearPresentation& p);

/// Generator embedded as a total_dim x total_dim block matrix.
CMatrix total_matrix(const LinearPresentation& p, const Generator& g);

struct SeedVector {
  Mask node = 0;
  std::vector<Complex> vector;
};

/// Smallest generator-invariant family containing the seeds, as orthonormal
/// per-node bases. A candidate direction is kept when its component orthogonal
/// to the current span exceeds rank_tol times the largest generator norm (or the largest seed norm).
SubspaceFamily generated_submodule(const LinearPresentation& p, const std::vector<SeedVector>& seeds,
                                   double rank_tol = 1e-6);

/// Splits a total-space vector into per-node seeds (zero components dropped).
std::vector<SeedVector> split_total(const LinearPresentation& p, const std::vector<Complex>& v);

std::size_t family_dim(const SubspaceFamily& f);

}  // namespace polydisk
