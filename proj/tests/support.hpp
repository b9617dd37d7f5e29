#pragma once

// Test-side oracles and object corpora. The oracles avoid the Schur-Parlett
// machinery under test: matrix exponentials come from a scaled Taylor series
// with repeated squaring, and phi from the exponential of an augmented matrix.

#include <cmath>
#include <random>
#include <vector>

#include "polydisk/builders.hpp"
#include "polydisk/cmatrix.hpp"
#include "polydisk/decomp.hpp"
#include "polydisk/matfun.hpp"
#include "polydisk/predmod.hpp"
#include "polydisk/verdier.hpp"

namespace testing_support {

using namespace polydisk;

inline double norm1(const CMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

/// exp(a) by a 60-term Taylor series of a / 2^s followed by s squarings.
inline CMatrix expm_taylor(const CMatrix& a, int terms = 60) {
  const std::size_t n = a.rows();
  int s = 0;
  double nrm = norm1(a);
  while (nrm > 0.5) {
    nrm /= 2.0;
    ++s;
  }
  const CMatrix x = a * Complex(std::ldexp(1.0, -s));
  CMatrix sum = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  for (int k = 1; k <= terms; ++k) {
    term = term * x * Complex(1.0 / k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// phi(theta) as the top-right block of exp([[2 pi i theta, 2 pi i], [0, 0]]).
inline CMatrix phi_oracle(const CMatrix& theta) {
  const std::size_t n = theta.rows();
  const Complex tpi{0.0, 2.0 * kPi};
  CMatrix aug(2 * n, 2 * n);
  aug.set_block(0, 0, theta * tpi);
  aug.set_block(0, n, CMatrix::identity(n) * tpi);
  return expm_taylor(aug).block(0, n, n, n);
}

inline CMatrix exp_oracle(const CMatrix& theta) { return expm_taylor(theta * Complex(0.0, 2.0 * kPi)); }

inline Complex crandn(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  return {re, nd(rng)};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random n x n matrix with spectral norm exactly `norm2`.
inline CMatrix random_with_norm(std::size_t n, double norm2, std::mt19937_64& rng) {
  CMatrix m = random_matrix(n, n, rng);
  return m * Complex(norm2 / spectral_norm(m));
}

/// Random matrix similar to diag(lambdas) through a well-conditioned similarity.
inline CMatrix random_with_spectrum(const std::vector<Complex>& lambdas, std::mt19937_64& rng) {
  const std::size_t n = lambdas.size();
  CMatrix g = random_basis_change({n}, rng).front();
  return g * CMatrix::diagonal(lambdas) * inverse(g);
}

/// A residue value with real part in [0.05, 0.95) and small imaginary part.
inline Complex strip_value(std::mt19937_64& rng) { return {uniform(rng, 0.05, 0.95), uniform(rng, -0.3, 0.3)}; }

inline PreDModule conjugate(const PreDModule& e, std::mt19937_64& rng) {
  return change_basis(e, random_basis_change(e.cube.dims, rng));
}

/// Pre-D-modules whose residues all have real part in [0, 1).
inline PreDModule random_strip_object(int r, std::mt19937_64& rng) {
  const PolydiskContext ctx{r, r};
  const int pick = static_cast<int>(rng() % 6);
  PreDModule e;
  switch (pick) {
    case 0: {
      const std::size_t n = 1 + rng() % 3;
      e = from_local_system(ctx, random_commuting_monodromies(r, n, rng), {}, ArrowStyle::t_is_theta);
      break;
    }
    case 1: {
      const std::size_t n = 1 + rng() % 3;
      e = from_local_system(ctx, random_commuting_monodromies(r, n, rng), {}, ArrowStyle::s_is_theta);
      break;
    }
    case 2:
      e = direct_sum(constant_object(ctx, strip_value(rng)), delta_object(ctx));
      break;
    case 3:
      e = extension_object(ctx, strip_value(rng), ExtensionVariant::jordan).object;
      break;
    case 4:
      e = extension_object(ctx, 0.0, ExtensionVariant::delta).object;
      break;
    default: {
      std::vector<Atom> atoms;
      for (int k = 0; k < r; ++k) {
        const auto t = rng() % 3;
        atoms.push_back(t == 0 ? Atom{Atom::Type::constant, strip_value(rng)}
                               : t == 1 ? Atom{Atom::Type::delta, 0.0} : Atom{Atom::Type::codelta, 0.0});
      }
      e = direct_sum(atom_product(ctx, atoms), constant_object(ctx, strip_value(rng)));
    }
  }
  return conjugate(e, rng);
}

inline VerdierObject conjugate(const VerdierObject& v, std::mt19937_64& rng) {
  return change_basis(v, random_basis_change(v.cube.dims, rng));
}

}  // namespace testing_support
