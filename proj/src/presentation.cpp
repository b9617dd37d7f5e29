#include "polydisk/presentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"

namespace polydisk {

std::size_t LinearPresentation::offset(Mask a) const {
  std::size_t off = 0;
  for (Mask m = 0; m < a; ++m) off += cube.dims[m];
  return off;
}

LinearPresentation to_presentation(const Hypercube& cube, ObjectKind kind) {
  cube.check_shapes();
  LinearPresentation p;
  p.kind = kind;
  p.cube = cube;
  for_each_map(cube, [&](const MapRef& ref, const CMatrix& m) {
    const GeneratorRole role = ref.role == MapRole::loop ? GeneratorRole::loop
                               : ref.role == MapRole::up ? GeneratorRole::up
                                                         : GeneratorRole::down;
    if (cube.dims[ref.source] == 0 || cube.dims[ref.target] == 0) return;
    p.generators.push_back({ref.source, ref.target, m, role, ref.stratum, ref.k});
    if (kind == ObjectKind::verdier && role == GeneratorRole::loop) {
      p.generators.push_back({ref.source, ref.target, inverse(m), GeneratorRole::loop_inverse, ref.stratum, ref.k});
    }
  });
  return p;
}

LinearPresentation adjoint_presentation(const LinearPresentation& p) {
  LinearPresentation q;
  q.kind = p.kind;
  q.cube = p.cube;
  for (const auto& g : p.generators) q.generators.push_back({g.target, g.source, g.matrix.adjoint(), g.role, g.stratum, g.k});
  return q;
}

CMatrix total_matrix(const LinearPresentation& p, const Generator& g) {
  const std::size_t n = p.total_dim();
  CMatrix out(n, n);
  out.set_block(p.offset(g.target), p.offset(g.source), g.matrix);
  return out;
}

std::vector<SeedVector> split_total(const LinearPresentation& p, const std::vector<Complex>& v) {
  if (v.size() != p.total_dim()) throw ShapeError("split_total: vector has wrong length");
  std::vector<SeedVector> out;
  std::size_t off = 0;
  for (Mask a = 0; a < p.node_count(); ++a) {
    const std::size_t n = p.dim(a);
    std::vector<Complex> part(v.begin() + off, v.begin() + off + n);
    off += n;
    bool nonzero = false;
    for (Complex z : part) nonzero = nonzero || z != Complex{0.0};
    if (nonzero) out.push_back({a, std::move(part)});
  }
  return out;
}

std::size_t family_dim(const SubspaceFamily& f) {
  std::size_t d = 0;
  for (const auto& b : f) d += b.cols();
  return d;
}

namespace {

double norm(const std::vector<Complex>& v) {
  double s = 0.0;
  for (Complex z : v) s += std::norm(z);
  return std::sqrt(s);
}

// Removes the components along `basis` (orthonormal); two passes of classical
// Gram-Schmidt keep the result orthogonal to working precision.
void orthogonalize(std::vector<Complex>& w, const std::vector<std::vector<Complex>>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      Complex c = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) c += std::conj(b[i]) * w[i];
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
    }
  }
}

std::vector<Complex> apply(const CMatrix& g, const std::vector<Complex>& v) {
  std::vector<Complex> out(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < g.cols(); ++j) acc += g(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace

SubspaceFamily generated_submodule(const LinearPresentation& p, const std::vector<SeedVector>& seeds, double rank_tol) {
  const std::size_t nodes = p.node_count();
  std::vector<std::vector<std::vector<Complex>>> basis(nodes);
  std::deque<std::pair<Mask, std::size_t>> pending;

  auto offer = [&](Mask node, std::vector<Complex> w, double scale) {
    if (basis[node].size() == p.dim(node)) return;
    orthogonalize(w, basis[node]);
    const double nw = norm(w);
    if (!(nw > rank_tol * scale) || nw == 0.0) return;
    for (Complex& z : w) z /= nw;
    basis[node].push_back(std::move(w));
    pending.emplace_back(node, basis[node].size() - 1);
  };

  // Seeds are judged against the largest one: the node components of one
  // total-space vector can carry pure rounding noise.
  double seed_scale = 0.0;
  for (const auto& seed : seeds) {
    if (seed.node >= nodes || seed.vector.size() != p.dim(seed.node)) {
      throw ShapeError("generated_submodule: seed does not live in node " + StratumIndex{seed.node}.label());
    }
    seed_scale = std::max(seed_scale, norm(seed.vector));
  }
  for (const auto& seed : seeds) offer(seed.node, seed.vector, seed_scale);

  std::vector<std::vector<std::size_t>> outgoing(nodes);
  std::vector<double> gnorm(p.generators.size());
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    outgoing[p.generators[i].source].push_back(i);
    gnorm[i] = frobenius_norm(p.generators[i].matrix);
  }
  // Candidates are judged against the largest generator, so a generator that
  // is zero up to rounding cannot contribute directions.
  const double gscale = gnorm.empty() ? 0.0 : *std::max_element(gnorm.begin(), gnorm.end());

  while (!pending.empty()) {
    const auto [node, idx] = pending.front();
    pending.pop_front();
    for (std::size_t gi : outgoing[node]) {
      const Generator& g = p.generators[gi];
      if (gnorm[gi] == 0.0) continue;
      // basis may reallocate inside offer; copy the vector first.
      const std::vector<Complex> v = basis[node][idx];
      offer(g.target, apply(g.matrix, v), gscale);
    }
  }

  SubspaceFamily out(nodes);
  for (Mask a = 0; a < nodes; ++a) out[a] = CMatrix::from_columns(p.dim(a), basis[a]);
  return out;
}

}  // namespace polydisk
