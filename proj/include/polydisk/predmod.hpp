#pragma once

// Fiber-level pre-D-module: per stratum A a space W_A with commuting residues
// Theta[A][k] (k = 1..r), and for k in A the maps t[A][k] : W_{A-k} -> W_A and
// s[A][k] : W_A -> W_{A-k} with st = Theta[A-k][k], ts = Theta[A][k].

#include <vector>

#include "polydisk/hypercube.hpp"
#include "polydisk/matfun.hpp"

namespace polydisk {

struct PreDModule {
  Hypercube cube;

  static PreDModule zeros(const PolydiskContext& ctx, std::vector<std::size_t> dims) {
    return {Hypercube::zeros(ctx, std::move(dims))};
  }

  const PolydiskContext& ctx() const { return cube.ctx; }
  int r() const { return cube.r(); }
  std::size_t dim(Mask a) const { return cube.dims[a]; }

  CMatrix& theta(Mask a, int k) { return cube.loop(a, k); }
  const CMatrix& theta(Mask a, int k) const { return cube.loop(a, k); }
  CMatrix& t(Mask a, int k) { return cube.up_map(a, k); }
  const CMatrix& t(Mask a, int k) const { return cube.up_map(a, k); }
  CMatrix& s(Mask a, int k) { return cube.down_map(a, k); }
  const CMatrix& s(Mask a, int k) const { return cube.down_map(a, k); }

  friend bool operator==(const PreDModule&, const PreDModule&) = default;
};

ValidationReport validate(const PreDModule& e, double tol);

/// Throws InvalidObjectError naming the first violation.
void require_valid(const PreDModule& e, double tol);

struct EigenvalueWitness {
  int level = 0;
  Mask first_stratum = 0;  // A, with the eigenvalue taken from Theta[A - k][k]
  int first_k = 0;
  Mask second_stratum = 0;
  int second_k = 0;
  Complex first_value;   // lambda
  Complex second_value;  // mu, with lambda - mu a positive integer
};

struct GoodEigenvalueResult {
  bool good = true;
  EigenvalueWitness witness;  // meaningful only when !good
};

/// Per codimension level c, pools the eigenvalues of Theta[A - k][k] over all
/// |A| = c, k in A, and looks for two that differ by a nonzero integer (within
/// tol). The object is validated at `validate_tol` first.
GoodEigenvalueResult good_residual_eigenvalues(const PreDModule& e, double tol, double validate_tol = 1e-8);

PreDModule direct_sum(const PreDModule& a, const PreDModule& b);
PreDModule change_basis(const PreDModule& e, const std::vector<CMatrix>& g);

struct PreDSubQuotient {
  PreDModule sub;
  PreDModule quotient;
  SubspaceFamily sub_basis;
  SubspaceFamily complement_basis;
};
PreDSubQuotient sub_quotient(const PreDModule& e, const SubspaceFamily& spans, double tol);

PreDModule degenerate(const PreDModule& e, const Filtration& filt, Complex tau, double tol);

enum class ArrowStyle { t_is_theta, s_is_theta };

/// Deligne construction on the constant hypercube W_A = C^n:
/// Theta[A][k] = log(M_k) / 2 pi i in the domain's strip, arrows per style.
PreDModule from_local_system(const PolydiskContext& ctx, const std::vector<CMatrix>& monodromies,
                             const FundamentalDomain& domain, ArrowStyle style, double tol = 1e-8);

/// External product: E on directions 1..r1, F on r1+1..r1+r2, W_{A u B} = E_A (x) F_B.
PreDModule external_product(const PreDModule& e, const PreDModule& f);

}  // namespace polydisk
