#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "algebra_internal.hpp"
#include "polydisk/algebra.hpp"
#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"

namespace polydisk {

namespace detail {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Complex gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  return {re, nd(rng)};
}

}  // namespace

ElementRecipe random_recipe(const LinearPresentation& p, std::mt19937_64& rng, std::size_t word_count,
                            std::size_t max_length) {
  ElementRecipe r;
  for (std::size_t a = 0; a < p.node_count(); ++a) r.idempotent.push_back(gaussian(rng));
  const std::size_t ng = p.generators.size();
  if (ng == 0) return r;
  std::uniform_int_distribution<std::size_t> pick_gen(0, ng - 1);
  std::uniform_int_distribution<std::size_t> pick_len(1, max_length);
  for (std::size_t w = 0; w < word_count; ++w) {
    std::vector<std::size_t> word{pick_gen(rng)};
    const std::size_t len = pick_len(rng);
    while (word.size() < len) {
      const Mask src = p.generators[word.back()].source;
      std::vector<std::size_t> next;
      for (std::size_t i = 0; i < ng; ++i)
        if (p.generators[i].target == src) next.push_back(i);
      if (next.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
      word.push_back(next[pick(rng)]);
    }
    r.words.push_back(std::move(word));
    r.word_coeff.push_back(gaussian(rng));
  }
  return r;
}

namespace {

CMatrix word_product(const LinearPresentation& p, const std::vector<std::size_t>& word) {
  CMatrix m = p.generators[word.front()].matrix;
  for (std::size_t i = 1; i < word.size(); ++i) m = m * p.generators[word[i]].matrix;
  return m;
}

}  // namespace

CMatrix evaluate(const LinearPresentation& p, const ElementRecipe& recipe, const LinearPresentation* scale_from) {
  const std::size_t n = p.total_dim();
  CMatrix z(n, n);
  for (Mask a = 0; a < p.node_count(); ++a) {
    const std::size_t off = p.offset(a);
    for (std::size_t i = 0; i < p.dim(a); ++i) z(off + i, off + i) += recipe.idempotent[a];
  }
  double gmax = 1.0;
  for (const auto& g : (scale_from ? *scale_from : p).generators) gmax = std::max(gmax, frobenius_norm(g.matrix));
  for (std::size_t w = 0; w < recipe.words.size(); ++w) {
    const auto& word = recipe.words[w];
    if (word.empty() || word.front() >= p.generators.size()) continue;
    CMatrix m = word_product(p, word);
    const double nm = frobenius_norm(scale_from ? word_product(*scale_from, word) : m);
    // Words that vanish up to rounding are dropped: normalizing them would blow
    // noise up to unit size.
    if (nm <= 1e-10 * std::pow(gmax, static_cast<double>(word.size()))) continue;
    m *= recipe.word_coeff[w] / nm;
    const Generator& first = p.generators[word.front()];
    const Generator& last = p.generators[word.back()];
    const std::size_t r0 = p.offset(first.target);
    const std::size_t c0 = p.offset(last.source);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) z(r0 + i, c0 + j) += m(i, j);
  }
  return z;
}

}  // namespace detail

const char* to_string(SimplicityStatus s) {
  switch (s) {
    case SimplicityStatus::simple:
      return "simple";
    case SimplicityStatus::not_simple:
      return "not-simple";
    case SimplicityStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

bool proper(std::size_t d, std::size_t n) { return d > 0 && d < n; }

SubspaceFamily complement_family(const SubspaceFamily& f) {
  SubspaceFamily out(f.size());
  for (std::size_t a = 0; a < f.size(); ++a) out[a] = orthogonal_complement(f[a]);
  return out;
}

std::vector<Complex> unit(std::size_t n, std::size_t i) {
  std::vector<Complex> v(n);
  v[i] = 1.0;
  return v;
}

}  // namespace

SimplicityResult is_simple(const LinearPresentation& p, const AlgebraOptions& opt) {
  const std::size_t n = p.total_dim();
  if (n == 0) return {SimplicityStatus::not_simple, {}, "zero object"};
  const LinearPresentation dual = adjoint_presentation(p);
  std::mt19937_64 rng(opt.seed);

  auto spin = [&](const LinearPresentation& q, const std::vector<Complex>& v) {
    return generated_submodule(q, split_total(q, v), opt.rank_tol);
  };

  for (int round = 0; round < opt.rounds; ++round) {
    const CMatrix z = detail::evaluate(p, detail::random_recipe(p, rng));
    const double scale = std::max(1.0, frobenius_norm(z));
    // Eigenvalues closer than 1e-4 * scale are treated as one cluster: a
    // repeated eigenvalue comes back split by rounding, and its eigenvectors are
    // then too ill-conditioned to certify anything.
    const auto ev = eigenvalues(z);
    std::vector<std::size_t> cluster(ev.size());
    std::iota(cluster.begin(), cluster.end(), 0);
    for (std::size_t i = 0; i < ev.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(ev[i] - ev[j]) <= 1e-4 * scale) {
          const std::size_t from = cluster[i], to = cluster[j];
          for (auto& c : cluster)
            if (c == from) c = to;
        }
    for (std::size_t root = 0; root < ev.size(); ++root) {
      Complex lambda = 0.0;
      std::size_t members = 0;
      for (std::size_t i = 0; i < ev.size(); ++i)
        if (cluster[i] == root) lambda += ev[i], ++members;
      if (members == 0) continue;
      lambda /= static_cast<double>(members);
      const CMatrix shifted_z = shifted(z, lambda);
      const CMatrix k = kernel_matrix(shifted_z, opt.rank_tol);
      for (std::size_t j = 0; j < k.cols(); ++j) {
        SubspaceFamily sub = spin(p, k.column(j));
        if (proper(family_dim(sub), n)) return {SimplicityStatus::not_simple, std::move(sub), "kernel vector spins to a proper submodule"};
      }
      if (members != 1 || k.cols() != 1) continue;
      const CMatrix kd = kernel_matrix(shifted_z.adjoint(), opt.rank_tol);
      if (kd.cols() != 1) continue;
      const SubspaceFamily dsub = spin(dual, kd.column(0));
      if (proper(family_dim(dsub), n)) {
        return {SimplicityStatus::not_simple, complement_family(dsub), "dual kernel vector spins to a proper submodule"};
      }
      return {SimplicityStatus::simple, {}, "Norton criterion satisfied"};
    }
  }

  if (n <= 6) {
    // Small objects: close up every eigenvector of one more random element and
    // every coordinate vector, on both sides.
    const CMatrix z = detail::evaluate(p, detail::random_recipe(p, rng));
    std::vector<std::vector<Complex>> seeds;
    for (Complex lambda : eigenvalues(z)) {
      const CMatrix k = kernel_matrix(shifted(z, lambda), opt.rank_tol);
      for (std::size_t j = 0; j < k.cols(); ++j) seeds.push_back(k.column(j));
    }
    for (std::size_t i = 0; i < n; ++i) seeds.push_back(unit(n, i));
    for (const auto& v : seeds) {
      SubspaceFamily sub = spin(p, v);
      if (proper(family_dim(sub), n)) return {SimplicityStatus::not_simple, std::move(sub), "closure of a probe vector is proper"};
      const SubspaceFamily dsub = spin(dual, v);
      if (proper(family_dim(dsub), n)) {
        return {SimplicityStatus::not_simple, complement_family(dsub), "dual closure of a probe vector is proper"};
      }
    }
    return {SimplicityStatus::simple, {}, "every probe vector generates the whole object"};
  }
  return {SimplicityStatus::inconclusive, {},
          "no random element with a one-dimensional eigenspace after " + std::to_string(opt.rounds) + " rounds"};
}

namespace {

StabilityResult stability_of(const LinearPresentation& p, const AlgebraOptions& opt) {
  if (p.total_dim() == 0) return {false, SimplicityStatus::not_simple, "stable requires a nonzero object"};
  const auto s = is_simple(p, opt);
  return {s.status == SimplicityStatus::simple, s.status, s.detail};
}

}  // namespace

StabilityResult is_stable(const PreDModule& e, const AlgebraOptions& opt) {
  require_valid(e, opt.tol);
  return stability_of(to_presentation(e), opt);
}

StabilityResult is_stable(const VerdierObject& v, const AlgebraOptions& opt) {
  require_valid(v, opt.tol);
  return stability_of(to_presentation(v), opt);
}

}  // namespace polydisk
