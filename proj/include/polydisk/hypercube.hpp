#pragma once

// Hypercube storage shared by pre-D-modules and Verdier objects: one vector
// space per stratum A, r commuting endomorphisms ("loops") per node, and for
// every k in A a map up[A][k] : W_{A-k} -> W_A and down[A][k] : W_A -> W_{A-k}.
//
// For a pre-D-module the loops are the residues Theta, up = t and down = s;
// for a Verdier object they are the monodromies, up = C and down = V.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "polydisk/cmatrix.hpp"
#include "polydisk/strata.hpp"

namespace polydisk {

enum class ObjectKind { pre_d_module, verdier };

enum class MapRole { loop, up, down };

/// Per-node subspaces, each given by a matrix whose columns span it.
using SubspaceFamily = std::vector<CMatrix>;

struct Hypercube {
  PolydiskContext ctx;
  std::vector<std::size_t> dims;            // [mask]
  std::vector<std::vector<CMatrix>> loops;  // [mask][k-1]
  std::vector<std::vector<CMatrix>> up;     // [mask][k-1], empty unless k in A
  std::vector<std::vector<CMatrix>> down;   // [mask][k-1], empty unless k in A

  /// All maps zero, correctly shaped for the given dimension vector.
  static Hypercube zeros(const PolydiskContext& ctx, std::vector<std::size_t> dims);

  int r() const { return ctx.divisor_multiplicity; }
  std::size_t node_count() const { return ctx.node_count(); }
  std::size_t total_dim() const;

  CMatrix& loop(Mask a, int k) { return loops[a][k - 1]; }
  const CMatrix& loop(Mask a, int k) const { return loops[a][k - 1]; }
  CMatrix& up_map(Mask a, int k) { return up[a][k - 1]; }
  const CMatrix& up_map(Mask a, int k) const { return up[a][k - 1]; }
  CMatrix& down_map(Mask a, int k) { return down[a][k - 1]; }
  const CMatrix& down_map(Mask a, int k) const { return down[a][k - 1]; }

  /// Throws ShapeError naming the first inconsistent map.
  void check_shapes() const;

  friend bool operator==(const Hypercube&, const Hypercube&) = default;
};

/// Visits every structural map with its role, stratum, direction (1-based),
/// source node and target node.
struct MapRef {
  MapRole role;
  Mask stratum;
  int k;
  Mask source;
  Mask target;
};
void for_each_map(const Hypercube& cube, const std::function<void(const MapRef&, const CMatrix&)>& fn);
void for_each_map(Hypercube& cube, const std::function<void(const MapRef&, CMatrix&)>& fn);

std::string describe(const MapRef& ref, ObjectKind kind);

struct Violation {
  std::string axiom;
  Mask stratum = 0;
  int k = 0;  // 0 when not applicable
  int l = 0;  // 0 when not applicable
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// e.g. "euler-st at [1,2] (k=1): residual 3.2e-04"
std::string describe(const Violation& v);

/// Checks the axioms of the given kind; residuals are scaled_difference values.
ValidationReport validate_cube(const Hypercube& cube, ObjectKind kind, double tol);

Hypercube direct_sum(const Hypercube& a, const Hypercube& b);

/// a on directions 1..r_a, b on r_a+1..r_a+r_b; node spaces are tensor products.
Hypercube external_product(const Hypercube& a, const Hypercube& b);

/// Same object written in new node bases: x_old = g_A x_new.
Hypercube change_basis(const Hypercube& cube, const std::vector<CMatrix>& g);

/// Restriction to per-node subspaces with orthonormal bases (B_t^* G B_s).
Hypercube restrict_to(const Hypercube& cube, const SubspaceFamily& orthonormal_bases);

/// Largest relative residual ||(I - P_t) G B_s|| / max(1, ||G||) over all maps,
/// reporting the worst map through `worst` when non-null.
double invariance_residual(const Hypercube& cube, const SubspaceFamily& orthonormal_bases, MapRef* worst = nullptr);

/// Orthonormalizes each node's spanning set (columns).
SubspaceFamily orthonormalize(const SubspaceFamily& spans, double rank_tol = 1e-10);

struct SubQuotient {
  Hypercube sub;
  Hypercube quotient;
  SubspaceFamily sub_basis;         // orthonormal, in the ambient coordinates
  SubspaceFamily complement_basis;  // orthonormal complement used for the quotient
};

/// Throws NotInvariantError when the subspaces are not invariant within tol.
SubQuotient sub_quotient(const Hypercube& cube, const SubspaceFamily& spans, ObjectKind kind, double tol);

/// Exhaustive increasing filtration F_{grades[0]} = 0 c ... c F_{grades.back()} = W.
struct Filtration {
  std::vector<int> grades;                  // strictly increasing labels
  std::vector<SubspaceFamily> subspaces;    // [grade index][mask]
};

/// Throws NotInvariantError / ShapeError when the filtration is not an
/// exhaustive chain of invariant subspaces.
void check_filtration(const Hypercube& cube, const Filtration& filt, ObjectKind kind, double tol);

/// Every map block from grade q to grade p (p <= q) is scaled by tau^(q-p) in
/// a basis adapted to the filtration.
Hypercube degenerate(const Hypercube& cube, const Filtration& filt, Complex tau, ObjectKind kind, double tol);

/// Adapted orthonormal basis per node and the grade label of each column.
struct AdaptedBasis {
  std::vector<CMatrix> basis;
  std::vector<std::vector<int>> grade_of_column;
};
AdaptedBasis adapted_basis(const Hypercube& cube, const Filtration& filt);

}  // namespace polydisk
