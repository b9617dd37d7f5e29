#pragma once

// Test and demo objects. Every builder returns an object that validates.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "polydisk/matfun.hpp"
#include "polydisk/predmod.hpp"
#include "polydisk/verdier.hpp"

namespace polydisk {

/// One-direction building blocks (r = 1):
///   constant(a): W_[] = W_[1] = C, Theta = a, t = a, s = 1
///   delta:       W_[] = 0,  W_[1] = C, Theta = 0
///   codelta:     W_[] = C,  W_[1] = 0, Theta = 0
/// constant(a) with a != 0, delta and codelta are simple; so are their external products.
struct Atom {
  enum class Type { constant, delta, codelta } type = Type::constant;
  Complex alpha = 0.0;
};

PreDModule atom_object(const Atom& atom);

/// External product of one atom per direction; the context's r must equal atoms.size().
PreDModule atom_product(const PolydiskContext& ctx, const std::vector<Atom>& atoms);

/// W_A = C only at the deepest stratum.
PreDModule delta_object(const PolydiskContext& ctx);

/// All W_A = C, Theta[A][k] = alpha, t = alpha, s = 1.
PreDModule constant_object(const PolydiskContext& ctx, Complex alpha);

enum class ExtensionVariant {
  // r = 1 core: W_[] = C, W_[1] = C^2, t = (1, 0)^T, s = (0, 1), Theta_[1] = e1 e2^T.
  // Non-split extension of constant(0) by delta (such extensions split when alpha != 0).
  delta,
  // Constant C^2 with Theta_1 = alpha + e1 e2^T, t = Theta, s = 1: non-split
  // self-extension of constant(alpha).
  jordan,
};

struct BuiltExtension {
  PreDModule object;
  Filtration filtration;  // 0 c sub c everything, grades 0, 1, 2
};

/// Other directions (k >= 2) carry constant(alpha) factors.
BuiltExtension extension_object(const PolydiskContext& ctx, Complex alpha, ExtensionVariant variant);

/// Commuting monodromies M_k = c_0 + c_1 B + c_2 B^2 for one random B, redrawn until
/// each M_k is well-conditioned and its log eigenvalues stay clear of the strip edges.
std::vector<CMatrix> random_commuting_monodromies(int r, std::size_t n, std::mt19937_64& rng,
                                                  const FundamentalDomain& domain = {});

/// Random invertible node matrices (well-conditioned) for basis changes.
std::vector<CMatrix> random_basis_change(const std::vector<std::size_t>& dims, std::mt19937_64& rng);

CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

/// Named builders used by the CLI `gen` subcommand.
struct BuilderParams {
  PolydiskContext ctx{1, 1};
  std::size_t n = 2;
  Complex alpha = 0.3;
  bool alpha_given = false;
  std::string variant;  // extension: "delta" | "jordan"; local-system: "t=theta" | "s=theta"
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::vector<std::string> parts;  // direct-sum / product components, "name[:key=value;...]"
};

PreDModule build_pre(const std::string& name, const BuilderParams& params);
VerdierObject build_verdier(const std::string& name, const BuilderParams& params);

/// Applies "key=value;..." overrides (n, alpha, variant, sigma, seed, r, d) to a copy.
BuilderParams with_overrides(const BuilderParams& base, const std::string& overrides);

/// "1.5" or "1.5,-2" or "1.5-2i" style complex parsing (DomainError on failure).
Complex parse_complex(const std::string& text);

}  // namespace polydisk
