#pragma once

// Riemann-Hilbert functor on fiber data and its Deligne-construction inverse:
//   Mono = exp(2 pi i Theta),  C = t,  V[A][k] = phi(Theta[A-k][k]) s[A][k].

#include <cstddef>
#include <vector>

#include "polydisk/matfun.hpp"
#include "polydisk/predmod.hpp"
#include "polydisk/verdier.hpp"

namespace polydisk {

/// Validates e at `tol` first (InvalidObjectError otherwise).
VerdierObject rh(const PreDModule& e, double tol = 1e-8);

/// Requires domain.base_real in (-1, 0] so phi is invertible on the strip.
PreDModule inverse_rh(const VerdierObject& v, const FundamentalDomain& domain, double tol = 1e-8);

struct JacobianRank {
  std::size_t rank = 0;
  std::size_t full_rank_expected = 0;
  std::vector<double> singular_values;
  bool full() const { return rank == full_rank_expected; }
};

/// Central-difference Jacobian of (s, t) -> (t, phi(st) s) on the 4nm real
/// coordinates of s (n x m) and t (m x n). Singular values count toward the
/// rank when > tol * max(1, sigma_max).
JacobianRank rh_jacobian_rank(const CMatrix& s, const CMatrix& t, double h = 1e-5, double tol = 1e-5);

}  // namespace polydisk
