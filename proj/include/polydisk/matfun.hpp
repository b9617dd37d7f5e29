#pragma once

// Matrix functions used by the Riemann-Hilbert functor:
//
//   phi(z)  = (exp(2 pi i z) - 1) / z,  phi(0) = 2 pi i   (entire)
//   e(z)    = exp(2 pi i z)
//   L_S(w)  = log(w) / (2 pi i), branch with real part in [s, s + 1)
//
// All three are evaluated through a complex Schur form with a block Parlett
// recurrence; diagonal blocks of clustered eigenvalues use a Taylor expansion
// about the cluster mean. Matrices whose sparsity graph splits into several
// components are evaluated component by component, so block-diagonal inputs
// give block-diagonal outputs bit-for-bit.

#include "polydisk/cmatrix.hpp"

namespace polydisk {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kTwoPiI{0.0, 2.0 * kPi};

/// Half-open strip { z : base_real <= Re z < base_real + 1 }.
struct FundamentalDomain {
  double base_real = 0.0;

  bool contains(Complex z) const { return z.real() >= base_real && z.real() < base_real + 1.0; }
  /// The unique z + n (n integer) lying in the strip.
  Complex reduce(Complex z) const;
};

Complex phi(Complex z);
Complex exp_2pii(Complex z);

CMatrix phi_matrix(const CMatrix& theta);
CMatrix exp_2pii(const CMatrix& theta);

/// Theta with exp(2 pi i Theta) = m and every eigenvalue of Theta in the
/// domain's strip. Throws NumericalError when m is singular
/// (sigma_min <= singular_tol * max(1, sigma_max)) or when the evaluation is
/// too ill-conditioned to complete.
CMatrix principal_log_over_2pii(const CMatrix& m, const FundamentalDomain& domain, double singular_tol = 1e-12);

}  // namespace polydisk
