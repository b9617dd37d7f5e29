#pragma once

// Fiber-level Verdier object: per stratum A a space with commuting invertible
// monodromies Mono[A][k], canonical maps C[A][k] : W_{A-k} -> W_A and variation
// maps V[A][k] : W_A -> W_{A-k}. Orientation convention: VC = CV = Mono - 1.

#include <vector>

#include "polydisk/hypercube.hpp"

namespace polydisk {

struct VerdierObject {
  Hypercube cube;

  static VerdierObject zeros(const PolydiskContext& ctx, std::vector<std::size_t> dims) {
    return {Hypercube::zeros(ctx, std::move(dims))};
  }

  const PolydiskContext& ctx() const { return cube.ctx; }
  int r() const { return cube.r(); }
  std::size_t dim(Mask a) const { return cube.dims[a]; }

  CMatrix& mono(Mask a, int k) { return cube.loop(a, k); }
  const CMatrix& mono(Mask a, int k) const { return cube.loop(a, k); }
  CMatrix& C(Mask a, int k) { return cube.up_map(a, k); }
  const CMatrix& C(Mask a, int k) const { return cube.up_map(a, k); }
  CMatrix& V(Mask a, int k) { return cube.down_map(a, k); }
  const CMatrix& V(Mask a, int k) const { return cube.down_map(a, k); }

  friend bool operator==(const VerdierObject&, const VerdierObject&) = default;
};

ValidationReport validate(const VerdierObject& v, double tol);
void require_valid(const VerdierObject& v, double tol);

/// Flags every A, k in A with ||Mono[A][k] - (1 + C V)|| > tol (axiom "monodromy-consistency").
ValidationReport monodromy_consistency(const VerdierObject& v, double tol);

VerdierObject direct_sum(const VerdierObject& a, const VerdierObject& b);
VerdierObject change_basis(const VerdierObject& v, const std::vector<CMatrix>& g);

struct VerdierSubQuotient {
  VerdierObject sub;
  VerdierObject quotient;
  SubspaceFamily sub_basis;
  SubspaceFamily complement_basis;
};
VerdierSubQuotient sub_quotient(const VerdierObject& v, const SubspaceFamily& spans, double tol);

VerdierObject degenerate(const VerdierObject& v, const Filtration& filt, Complex tau, double tol);

/// Constant hypercube C^n with Mono[A][k] = M_k, C = M_k - 1, V = 1.
VerdierObject verdier_from_local_system(const PolydiskContext& ctx, const std::vector<CMatrix>& monodromies,
                                        double tol = 1e-8);

VerdierObject external_product(const VerdierObject& e, const VerdierObject& f);

}  // namespace polydisk
