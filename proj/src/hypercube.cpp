#include "polydisk/hypercube.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"

namespace polydisk {

namespace {

Mask without(Mask a, int k) { return a & ~(Mask{1} << (k - 1)); }
bool has(Mask a, int k) { return (a >> (k - 1)) & 1u; }

std::string shape_of(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

Hypercube Hypercube::zeros(const PolydiskContext& ctx, std::vector<std::size_t> dims) {
  ctx.check();
  if (dims.size() != ctx.node_count()) throw ShapeError("dimension vector has wrong length");
  Hypercube h;
  h.ctx = ctx;
  h.dims = std::move(dims);
  const int r = ctx.divisor_multiplicity;
  h.loops.assign(h.node_count(), std::vector<CMatrix>(r));
  h.up.assign(h.node_count(), std::vector<CMatrix>(r));
  h.down.assign(h.node_count(), std::vector<CMatrix>(r));
  for (Mask a = 0; a < h.node_count(); ++a) {
    for (int k = 1; k <= r; ++k) {
      h.loop(a, k) = CMatrix(h.dims[a], h.dims[a]);
      if (has(a, k)) {
        h.up_map(a, k) = CMatrix(h.dims[a], h.dims[without(a, k)]);
        h.down_map(a, k) = CMatrix(h.dims[without(a, k)], h.dims[a]);
      }
    }
  }
  return h;
}

std::size_t Hypercube::total_dim() const { return std::accumulate(dims.begin(), dims.end(), std::size_t{0}); }

void Hypercube::check_shapes() const {
  ctx.check();
  const int rr = r();
  auto fail = [](const std::string& what) { throw ShapeError(what); };
  if (dims.size() != node_count() || loops.size() != node_count() || up.size() != node_count() ||
      down.size() != node_count()) {
    fail("hypercube storage does not cover all 2^r strata");
  }
  for (Mask a = 0; a < node_count(); ++a) {
    const std::string label = StratumIndex{a}.label();
    if (loops[a].size() != static_cast<std::size_t>(rr) || up[a].size() != static_cast<std::size_t>(rr) ||
        down[a].size() != static_cast<std::size_t>(rr)) {
      fail("node " + label + ": expected " + std::to_string(rr) + " maps per direction");
    }
    for (int k = 1; k <= rr; ++k) {
      const CMatrix& l = loop(a, k);
      if (l.rows() != dims[a] || l.cols() != dims[a]) {
        fail("node " + label + " loop " + std::to_string(k) + ": expected " + shape_of(dims[a], dims[a]) + ", got " +
             shape_of(l.rows(), l.cols()));
      }
      if (!all_finite(l)) fail("node " + label + " loop " + std::to_string(k) + ": non-finite entry");
      const CMatrix& u = up_map(a, k);
      const CMatrix& d = down_map(a, k);
      if (has(a, k)) {
        const std::size_t nb = dims[without(a, k)];
        if (u.rows() != dims[a] || u.cols() != nb) {
          fail("arrow " + label + "|" + std::to_string(k) + " (up): expected " + shape_of(dims[a], nb) + ", got " +
               shape_of(u.rows(), u.cols()));
        }
        if (d.rows() != nb || d.cols() != dims[a]) {
          fail("arrow " + label + "|" + std::to_string(k) + " (down): expected " + shape_of(nb, dims[a]) + ", got " +
               shape_of(d.rows(), d.cols()));
        }
        if (!all_finite(u) || !all_finite(d)) fail("arrow " + label + "|" + std::to_string(k) + ": non-finite entry");
      } else if (!u.empty() || !d.empty() || u.rows() || d.rows()) {
        fail("arrow " + label + "|" + std::to_string(k) + " present although " + std::to_string(k) + " is not in A");
      }
    }
  }
}

void for_each_map(const Hypercube& cube, const std::function<void(const MapRef&, const CMatrix&)>& fn) {
  for (Mask a = 0; a < cube.node_count(); ++a) {
    for (int k = 1; k <= cube.r(); ++k) {
      fn(MapRef{MapRole::loop, a, k, a, a}, cube.loop(a, k));
      if (has(a, k)) {
        const Mask b = without(a, k);
        fn(MapRef{MapRole::up, a, k, b, a}, cube.up_map(a, k));
        fn(MapRef{MapRole::down, a, k, a, b}, cube.down_map(a, k));
      }
    }
  }
}

void for_each_map(Hypercube& cube, const std::function<void(const MapRef&, CMatrix&)>& fn) {
  for (Mask a = 0; a < cube.node_count(); ++a) {
    for (int k = 1; k <= cube.r(); ++k) {
      fn(MapRef{MapRole::loop, a, k, a, a}, cube.loop(a, k));
      if (has(a, k)) {
        const Mask b = without(a, k);
        fn(MapRef{MapRole::up, a, k, b, a}, cube.up_map(a, k));
        fn(MapRef{MapRole::down, a, k, a, b}, cube.down_map(a, k));
      }
    }
  }
}

std::string describe(const MapRef& ref, ObjectKind kind) {
  const bool pre = kind == ObjectKind::pre_d_module;
  const std::string label = StratumIndex{ref.stratum}.label();
  switch (ref.role) {
    case MapRole::loop:
      return std::string(pre ? "theta" : "mono") + "[" + label + "][" + std::to_string(ref.k) + "]";
    case MapRole::up:
      return std::string(pre ? "t" : "C") + "[" + label + "|" + std::to_string(ref.k) + "]";
    case MapRole::down:
      return std::string(pre ? "s" : "V") + "[" + label + "|" + std::to_string(ref.k) + "]";
  }
  return "?";
}

std::string describe(const Violation& v) {
  std::string out = v.axiom + " at " + StratumIndex{v.stratum}.label();
  if (v.k) out += " (k=" + std::to_string(v.k) + (v.l ? ", l=" + std::to_string(v.l) : std::string()) + ")";
  char buf[64];
  std::snprintf(buf, sizeof buf, ": residual %.3e", v.residual);
  return out + buf;
}

ValidationReport validate_cube(const Hypercube& cube, ObjectKind kind, double tol) {
  cube.check_shapes();
  const bool pre = kind == ObjectKind::pre_d_module;
  const Complex shift = pre ? 0.0 : 1.0;
  const int r = cube.r();
  ValidationReport report;
  auto check = [&](const char* axiom, Mask a, int k, int l, const CMatrix& lhs, const CMatrix& rhs) {
    const double res = scaled_difference(lhs, rhs);
    if (!(res <= tol)) report.violations.push_back({axiom, a, k, l, res});
  };

  for (Mask a = 0; a < cube.node_count(); ++a) {
    for (int j = 1; j <= r; ++j) {
      if (!pre && cube.dims[a] > 0) {
        const auto sv = svd(cube.loop(a, j)).values;
        const double rel = sv.back() / std::max(1.0, sv.front());
        if (!(rel > tol)) report.violations.push_back({"invertibility", a, j, 0, rel});
      }
      for (int k = j + 1; k <= r; ++k) {
        const double res = commute_residual(cube.loop(a, j), cube.loop(a, k));
        if (!(res <= tol)) report.violations.push_back({pre ? "integrability" : "commutation", a, j, k, res});
      }
    }
    for (int k = 1; k <= r; ++k) {
      if (!has(a, k)) continue;
      const Mask b = without(a, k);
      const CMatrix& u = cube.up_map(a, k);
      const CMatrix& d = cube.down_map(a, k);
      check(pre ? "euler-st" : "relation-VC", a, k, 0, d * u, shifted(cube.loop(b, k), shift));
      check(pre ? "euler-ts" : "relation-CV", a, k, 0, u * d, shifted(cube.loop(a, k), shift));
      for (int j = 1; j <= r; ++j) {
        check(pre ? "linearity-t" : "intertwining-C", a, k, j, u * cube.loop(b, j), cube.loop(a, j) * u);
        check(pre ? "linearity-s" : "intertwining-V", a, k, j, d * cube.loop(a, j), cube.loop(b, j) * d);
      }
    }
    for (int k = 1; k <= r; ++k) {
      for (int l = 1; l <= r; ++l) {
        if (k == l || !has(a, k) || !has(a, l)) continue;
        const Mask ak = without(a, k);
        const Mask al = without(a, l);
        if (k < l) {
          check("diagram-I", a, k, l, cube.up_map(a, k) * cube.up_map(ak, l), cube.up_map(a, l) * cube.up_map(al, k));
          check("diagram-II", a, k, l, cube.down_map(al, k) * cube.down_map(a, l),
                cube.down_map(ak, l) * cube.down_map(a, k));
        }
        check("diagram-III", a, k, l, cube.up_map(al, k) * cube.down_map(ak, l),
              cube.down_map(a, l) * cube.up_map(a, k));
      }
    }
  }
  return report;
}

Hypercube direct_sum(const Hypercube& a, const Hypercube& b) {
  if (!(a.ctx == b.ctx)) throw ShapeError("direct_sum: contexts differ");
  a.check_shapes();
  b.check_shapes();
  std::vector<std::size_t> dims(a.node_count());
  for (Mask m = 0; m < a.node_count(); ++m) dims[m] = a.dims[m] + b.dims[m];
  Hypercube out = Hypercube::zeros(a.ctx, dims);
  for (Mask m = 0; m < a.node_count(); ++m) {
    for (int k = 1; k <= a.r(); ++k) {
      out.loop(m, k) = block_diag(a.loop(m, k), b.loop(m, k));
      if (has(m, k)) {
        out.up_map(m, k) = block_diag(a.up_map(m, k), b.up_map(m, k));
        out.down_map(m, k) = block_diag(a.down_map(m, k), b.down_map(m, k));
      }
    }
  }
  return out;
}

Hypercube external_product(const Hypercube& a, const Hypercube& b) {
  a.check_shapes();
  b.check_shapes();
  const int ra = a.r();
  const int rb = b.r();
  PolydiskContext ctx{a.ctx.ambient_dim + b.ctx.ambient_dim, ra + rb};
  ctx.check();
  auto split = [&](Mask m) { return std::pair<Mask, Mask>{m & a.ctx.full_mask(), m >> ra}; };
  std::vector<std::size_t> dims(ctx.node_count());
  for (Mask m = 0; m < ctx.node_count(); ++m) {
    const auto [ma, mb] = split(m);
    dims[m] = a.dims[ma] * b.dims[mb];
  }
  Hypercube out = Hypercube::zeros(ctx, dims);
  for (Mask m = 0; m < ctx.node_count(); ++m) {
    const auto [ma, mb] = split(m);
    const CMatrix ia = CMatrix::identity(a.dims[ma]);
    const CMatrix ib = CMatrix::identity(b.dims[mb]);
    for (int k = 1; k <= ra; ++k) {
      out.loop(m, k) = kron(a.loop(ma, k), ib);
      if (has(m, k)) {
        out.up_map(m, k) = kron(a.up_map(ma, k), ib);
        out.down_map(m, k) = kron(a.down_map(ma, k), ib);
      }
    }
    for (int k = 1; k <= rb; ++k) {
      out.loop(m, ra + k) = kron(ia, b.loop(mb, k));
      if (has(m, ra + k)) {
        out.up_map(m, ra + k) = kron(ia, b.up_map(mb, k));
        out.down_map(m, ra + k) = kron(ia, b.down_map(mb, k));
      }
    }
  }
  return out;
}

Hypercube change_basis(const Hypercube& cube, const std::vector<CMatrix>& g) {
  if (g.size() != cube.node_count()) throw ShapeError("change_basis: need one matrix per node");
  std::vector<CMatrix> ginv(g.size());
  for (Mask m = 0; m < cube.node_count(); ++m) {
    if (g[m].rows() != cube.dims[m] || !g[m].is_square()) throw ShapeError("change_basis: bad matrix shape");
    ginv[m] = inverse(g[m]);
  }
  Hypercube out = cube;
  for_each_map(out, [&](const MapRef& ref, CMatrix& mat) { mat = ginv[ref.target] * mat * g[ref.source]; });
  return out;
}

Hypercube restrict_to(const Hypercube& cube, const SubspaceFamily& bases) {
  if (bases.size() != cube.node_count()) throw ShapeError("restrict_to: need one basis per node");
  std::vector<std::size_t> dims(cube.node_count());
  for (Mask m = 0; m < cube.node_count(); ++m) {
    if (bases[m].rows() != cube.dims[m]) throw ShapeError("restrict_to: basis has wrong ambient dimension");
    dims[m] = bases[m].cols();
  }
  Hypercube out = Hypercube::zeros(cube.ctx, dims);
  std::vector<CMatrix> adj(bases.size());
  for (std::size_t m = 0; m < bases.size(); ++m) adj[m] = bases[m].adjoint();
  for_each_map(cube, [&](const MapRef& ref, const CMatrix& mat) {
    CMatrix restricted = adj[ref.target] * mat * bases[ref.source];
    switch (ref.role) {
      case MapRole::loop:
        out.loop(ref.stratum, ref.k) = std::move(restricted);
        break;
      case MapRole::up:
        out.up_map(ref.stratum, ref.k) = std::move(restricted);
        break;
      case MapRole::down:
        out.down_map(ref.stratum, ref.k) = std::move(restricted);
        break;
    }
  });
  return out;
}

double invariance_residual(const Hypercube& cube, const SubspaceFamily& bases, MapRef* worst) {
  double max_res = 0.0;
  for_each_map(cube, [&](const MapRef& ref, const CMatrix& mat) {
    const CMatrix& bs = bases[ref.source];
    const CMatrix& bt = bases[ref.target];
    if (bs.cols() == 0 || mat.rows() == 0) return;
    const CMatrix image = mat * bs;
    const CMatrix outside = image - bt * (bt.adjoint() * image);
    const double res = frobenius_norm(outside) / std::max(1.0, frobenius_norm(mat));
    if (res > max_res) {
      max_res = res;
      if (worst) *worst = ref;
    }
  });
  return max_res;
}

SubspaceFamily orthonormalize(const SubspaceFamily& spans, double rank_tol) {
  SubspaceFamily out(spans.size());
  for (std::size_t m = 0; m < spans.size(); ++m) out[m] = range_basis(spans[m], rank_tol);
  return out;
}

SubQuotient sub_quotient(const Hypercube& cube, const SubspaceFamily& spans, ObjectKind kind, double tol) {
  cube.check_shapes();
  if (spans.size() != cube.node_count()) throw ShapeError("sub_quotient: need one subspace per node");
  for (Mask m = 0; m < cube.node_count(); ++m) {
    if (spans[m].rows() != cube.dims[m]) {
      throw ShapeError("sub_quotient: subspace at node " + StratumIndex{m}.label() + " has wrong ambient dimension");
    }
  }
  SubQuotient out;
  out.sub_basis = orthonormalize(spans);
  MapRef worst{};
  const double res = invariance_residual(cube, out.sub_basis, &worst);
  if (res > tol) {
    throw NotInvariantError("subspaces are not invariant under " + describe(worst, kind) + " (residual " +
                            std::to_string(res) + ")");
  }
  out.complement_basis.resize(cube.node_count());
  for (Mask m = 0; m < cube.node_count(); ++m) out.complement_basis[m] = orthogonal_complement(out.sub_basis[m]);
  out.sub = restrict_to(cube, out.sub_basis);
  out.quotient = restrict_to(cube, out.complement_basis);
  return out;
}

void check_filtration(const Hypercube& cube, const Filtration& filt, ObjectKind kind, double tol) {
  cube.check_shapes();
  if (filt.grades.empty() || filt.grades.size() != filt.subspaces.size()) {
    throw ShapeError("filtration: grades and subspaces must be non-empty and of equal length");
  }
  for (std::size_t g = 0; g + 1 < filt.grades.size(); ++g) {
    if (filt.grades[g] >= filt.grades[g + 1]) throw ShapeError("filtration: grades must be strictly increasing");
  }
  std::vector<SubspaceFamily> ortho;
  for (std::size_t g = 0; g < filt.grades.size(); ++g) {
    const auto& fam = filt.subspaces[g];
    if (fam.size() != cube.node_count()) throw ShapeError("filtration: need one subspace per node at every grade");
    for (Mask m = 0; m < cube.node_count(); ++m) {
      if (fam[m].rows() != cube.dims[m]) throw ShapeError("filtration: subspace has wrong ambient dimension");
    }
    ortho.push_back(orthonormalize(fam));
  }
  for (Mask m = 0; m < cube.node_count(); ++m) {
    if (ortho.front()[m].cols() != 0) throw ShapeError("filtration: lowest grade must be zero (not exhaustive)");
    if (ortho.back()[m].cols() != cube.dims[m]) throw ShapeError("filtration: highest grade must be everything");
  }
  for (std::size_t g = 0; g + 1 < ortho.size(); ++g) {
    for (Mask m = 0; m < cube.node_count(); ++m) {
      const CMatrix& lo = ortho[g][m];
      const CMatrix& hi = ortho[g + 1][m];
      if (lo.cols() == 0) continue;
      const double res = frobenius_norm(lo - hi * (hi.adjoint() * lo));
      if (res > tol) throw NotInvariantError("filtration: grades are not nested at node " + StratumIndex{m}.label());
    }
  }
  for (std::size_t g = 0; g < ortho.size(); ++g) {
    MapRef worst{};
    const double res = invariance_residual(cube, ortho[g], &worst);
    if (res > tol) {
      throw NotInvariantError("filtration grade " + std::to_string(filt.grades[g]) + " is not invariant under " +
                              describe(worst, kind) + " (residual " + std::to_string(res) + ")");
    }
  }
}

AdaptedBasis adapted_basis(const Hypercube& cube, const Filtration& filt) {
  AdaptedBasis out;
  out.basis.resize(cube.node_count());
  out.grade_of_column.resize(cube.node_count());
  for (Mask m = 0; m < cube.node_count(); ++m) {
    const std::size_t n = cube.dims[m];
    CMatrix basis(n, 0);
    std::vector<int> grades;
    for (std::size_t g = 0; g < filt.grades.size(); ++g) {
      const CMatrix span = range_basis(filt.subspaces[g][m], 1e-10);
      if (span.cols() <= basis.cols()) continue;
      // New directions: the part of F_g orthogonal to what we already have.
      const CMatrix fresh = span - basis * (basis.adjoint() * span);
      const auto s = svd(fresh);
      const CMatrix add = s.u.columns(0, span.cols() - basis.cols());
      basis = hstack(basis, add);
      grades.insert(grades.end(), add.cols(), filt.grades[g]);
    }
    out.basis[m] = std::move(basis);
    out.grade_of_column[m] = std::move(grades);
  }
  return out;
}

Hypercube degenerate(const Hypercube& cube, const Filtration& filt, Complex tau, ObjectKind kind, double tol) {
  check_filtration(cube, filt, kind, tol);
  const AdaptedBasis ab = adapted_basis(cube, filt);
  Hypercube out = restrict_to(cube, ab.basis);
  auto tau_pow = [&](int e) {
    Complex p = 1.0;
    for (int i = 0; i < e; ++i) p *= tau;
    return p;
  };
  for_each_map(out, [&](const MapRef& ref, CMatrix& mat) {
    const auto& gs = ab.grade_of_column[ref.source];
    const auto& gt = ab.grade_of_column[ref.target];
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      for (std::size_t j = 0; j < mat.cols(); ++j) {
        const int e = gs[j] - gt[i];
        // e < 0 blocks vanish by invariance; drop their rounding noise.
        mat(i, j) = (e < 0) ? Complex{0.0} : mat(i, j) * tau_pow(e);
      }
    }
  });
  return out;
}

}  // namespace polydisk
