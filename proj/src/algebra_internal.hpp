#pragma once

// Random algebra elements shared by the simplicity and isomorphism tests.

#include <cstdint>
#include <random>
#include <vector>

#include "polydisk/presentation.hpp"

namespace polydisk::detail {

/// Coefficients and generator walks of one random element; evaluating the same
/// recipe on two presentations with matching generator lists gives matched elements.
struct ElementRecipe {
  std::vector<Complex> idempotent;  // per node
  std::vector<std::vector<std::size_t>> words;  // g_1 g_2 ... with target(g_{i+1}) = source(g_i)
  std::vector<Complex> word_coeff;
};

ElementRecipe random_recipe(const LinearPresentation& p, std::mt19937_64& rng, std::size_t word_count = 6,
                            std::size_t max_length = 3);

/// Each word is normalized by its Frobenius norm in `scale_from` (default: p itself),
/// so matched elements of two isomorphic presentations stay conjugate.
CMatrix evaluate(const LinearPresentation& p, const ElementRecipe& recipe,
                 const LinearPresentation* scale_from = nullptr);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace polydisk::detail
