#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "algebra_internal.hpp"
#include "polydisk/algebra.hpp"
#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"

namespace polydisk {

const char* to_string(IsoStatus s) {
  switch (s) {
    case IsoStatus::yes:
      return "yes";
    case IsoStatus::no:
      return "no";
    case IsoStatus::probably_not:
      return "probably-not";
  }
  return "?";
}

namespace {

std::string fmt(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// Traces of (m / max(1, ||m||_F))^j for j = 1..n: the power sums of the
// normalized spectrum, which fix the characteristic polynomial.
std::vector<Complex> power_traces(const CMatrix& m, double scale) {
  const std::size_t n = m.rows();
  std::vector<Complex> out;
  if (n == 0) return out;
  const CMatrix a = m * Complex(1.0 / scale);
  CMatrix pw = a;
  for (std::size_t j = 1; j <= n; ++j) {
    Complex tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += pw(i, i);
    out.push_back(tr);
    if (j < n) pw = pw * a;
  }
  return out;
}

// Returns a description of the first mismatching power trace, or "" when all agree.
std::string compare_spectra(const CMatrix& x, const CMatrix& y, double tol) {
  const double scale = std::max({1.0, frobenius_norm(x), frobenius_norm(y)});
  const auto tx = power_traces(x, scale);
  const auto ty = power_traces(y, scale);
  for (std::size_t j = 0; j < tx.size(); ++j) {
    if (std::abs(tx[j] - ty[j]) > tol * static_cast<double>(x.rows())) {
      return "trace of power " + std::to_string(j + 1) + " differs (" + fmt(tx[j] * std::pow(scale, j + 1.0)) +
             " vs " + fmt(ty[j] * std::pow(scale, j + 1.0)) + ")";
    }
  }
  return {};
}

std::string generator_name(const Generator& g, ObjectKind kind) {
  const MapRole role = g.role == GeneratorRole::up ? MapRole::up : g.role == GeneratorRole::down ? MapRole::down : MapRole::loop;
  std::string name = describe(MapRef{role, g.stratum, g.k, g.source, g.target}, kind);
  return g.role == GeneratorRole::loop_inverse ? name + "^-1" : name;
}

}  // namespace

IsoResult isomorphic(const LinearPresentation& a, const LinearPresentation& b, const AlgebraOptions& opt) {
  if (a.kind != b.kind) throw DomainError("isomorphic: objects are of different kinds");
  if (!(a.cube.ctx == b.cube.ctx)) throw DomainError("isomorphic: objects live on different contexts");
  IsoResult out;
  for (Mask m = 0; m < a.node_count(); ++m) {
    if (a.dim(m) != b.dim(m)) {
      out.status = IsoStatus::no;
      out.invariant = "dimension vectors differ at " + StratumIndex{m}.label() + " (" + std::to_string(a.dim(m)) +
                      " vs " + std::to_string(b.dim(m)) + ")";
      return out;
    }
  }
  if (a.generators.size() != b.generators.size()) throw ShapeError("isomorphic: generator lists do not match");

  // Spectral invariants: each loop, then matched random algebra elements.
  for (std::size_t i = 0; i < a.generators.size(); ++i) {
    const Generator& g = a.generators[i];
    if (g.role != GeneratorRole::loop) continue;
    const std::string diff = compare_spectra(g.matrix, b.generators[i].matrix, opt.rank_tol);
    if (!diff.empty()) {
      out.status = IsoStatus::no;
      out.invariant = generator_name(g, a.kind) + ": " + diff;
      return out;
    }
  }
  std::mt19937_64 rng(opt.seed);
  for (int trial = 0; trial < 3; ++trial) {
    const auto recipe = detail::random_recipe(a, rng);
    const std::string diff = compare_spectra(detail::evaluate(a, recipe), detail::evaluate(b, recipe, &a), opt.rank_tol);
    if (!diff.empty()) {
      out.status = IsoStatus::no;
      out.invariant = "random algebra element " + std::to_string(trial) + ": " + diff;
      return out;
    }
  }

  // Hom space: X_B G = G' X_A for every generator G : A -> B.
  const std::size_t nodes = a.node_count();
  std::vector<std::size_t> off(nodes + 1, 0);
  for (Mask m = 0; m < nodes; ++m) off[m + 1] = off[m] + a.dim(m) * a.dim(m);
  const std::size_t unknowns = off[nodes];
  if (unknowns == 0) {
    out.status = IsoStatus::yes;
    out.intertwiner.assign(nodes, CMatrix(0, 0));
    return out;
  }
  std::size_t rows = 0;
  for (const auto& g : a.generators) rows += g.matrix.rows() * g.matrix.cols();
  CMatrix system(rows, unknowns);
  std::size_t row = 0;
  for (std::size_t gi = 0; gi < a.generators.size(); ++gi) {
    const CMatrix& g = a.generators[gi].matrix;
    const CMatrix& h = b.generators[gi].matrix;
    const Mask src = a.generators[gi].source;
    const Mask tgt = a.generators[gi].target;
    const std::size_t ns = a.dim(src);
    const std::size_t nt = a.dim(tgt);
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t j = 0; j < ns; ++j, ++row) {
        for (std::size_t q = 0; q < nt; ++q) system(row, off[tgt] + i * nt + q) += g(q, j);
        for (std::size_t q = 0; q < ns; ++q) system(row, off[src] + q * ns + j) -= h(i, q);
      }
    }
  }
  // A map that is zero up to rounding must still admit every intertwiner, so
  // the kernel cut is never below tol * max(1, largest generator).
  double gscale = 1.0;
  for (std::size_t gi = 0; gi < a.generators.size(); ++gi)
    gscale = std::max({gscale, frobenius_norm(a.generators[gi].matrix), frobenius_norm(b.generators[gi].matrix)});
  const CMatrix kernel = kernel_matrix(system, opt.tol, gscale);
  if (kernel.cols() == 0) {
    out.status = IsoStatus::no;
    out.invariant = "no nonzero homomorphism";
    return out;
  }
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> coeff(kernel.cols());
    for (auto& c : coeff) {
      const double re = nd(rng);
      c = {re, nd(rng)};
    }
    std::vector<CMatrix> x(nodes);
    bool invertible = true;
    for (Mask m = 0; m < nodes && invertible; ++m) {
      const std::size_t n = a.dim(m);
      x[m] = CMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Complex v = 0.0;
          for (std::size_t c = 0; c < coeff.size(); ++c) v += coeff[c] * kernel(off[m] + i * n + j, c);
          x[m](i, j) = v;
        }
      if (n == 0) continue;
      const auto sv = svd(x[m]).values;
      invertible = sv.back() > 1e-8 * sv.front();
    }
    if (invertible) {
      out.status = IsoStatus::yes;
      out.intertwiner = std::move(x);
      return out;
    }
  }
  out.status = IsoStatus::probably_not;
  out.invariant = "no invertible element found in a " + std::to_string(kernel.cols()) + "-dimensional Hom space";
  return out;
}

JordanHolderReport jordan_holder(const LinearPresentation& p, const AlgebraOptions& opt) {
  JordanHolderReport report;
  report.kind = p.kind;
  report.dims = p.cube.dims;
  const std::size_t nodes = p.node_count();

  Hypercube current = p.cube;
  std::vector<CMatrix> to_input(nodes);  // columns: current coordinates inside the input's
  SubspaceFamily filtered(nodes);
  for (Mask m = 0; m < nodes; ++m) {
    to_input[m] = CMatrix::identity(p.dim(m));
    filtered[m] = CMatrix(p.dim(m), 0);
  }
  report.filtration.grades.push_back(0);
  report.filtration.subspaces.push_back(filtered);

  std::uint64_t calls = 0;
  while (current.total_dim() > 0) {
    // Descend to a simple submodule of `current`.
    std::vector<CMatrix> embed(nodes);
    for (Mask m = 0; m < nodes; ++m) embed[m] = CMatrix::identity(current.dims[m]);
    Hypercube sub = current;
    for (;;) {
      AlgebraOptions o = opt;
      o.seed = detail::mix_seed(opt.seed, calls++);
      const auto res = is_simple(to_presentation(sub, p.kind), o);
      if (res.status == SimplicityStatus::inconclusive) {
        report.decided = false;
        report.detail = "simplicity test inconclusive: " + res.detail;
        return report;
      }
      if (res.status == SimplicityStatus::simple) break;
      for (Mask m = 0; m < nodes; ++m) embed[m] = embed[m] * res.witness[m];
      sub = restrict_to(current, embed);
    }
    report.composition_factors.push_back(sub);

    SubspaceFamily complement(nodes);
    for (Mask m = 0; m < nodes; ++m) {
      filtered[m] = hstack(filtered[m], to_input[m] * embed[m]);
      complement[m] = orthogonal_complement(embed[m]);
      to_input[m] = to_input[m] * complement[m];
    }
    report.filtration.grades.push_back(static_cast<int>(report.filtration.grades.size()));
    report.filtration.subspaces.push_back(filtered);
    current = restrict_to(current, complement);
  }

  for (const auto& f : report.composition_factors) {
    bool grouped = false;
    for (auto& cls : report.factors) {
      if (cls.object.dims != f.dims) continue;
      AlgebraOptions o = opt;
      o.seed = detail::mix_seed(opt.seed, calls++);
      if (isomorphic(to_presentation(cls.object, p.kind), to_presentation(f, p.kind), o).status == IsoStatus::yes) {
        ++cls.multiplicity;
        grouped = true;
        break;
      }
    }
    if (!grouped) report.factors.push_back({f, 1});
  }
  report.decided = true;
  report.detail = std::to_string(report.composition_factors.size()) + " composition factors";
  return report;
}

Hypercube semisimplify(const LinearPresentation& p, const AlgebraOptions& opt) {
  const auto report = jordan_holder(p, opt);
  if (!report.decided) throw InconclusiveError(report.detail);
  if (report.composition_factors.empty()) return p.cube;
  Hypercube out = report.composition_factors.front();
  for (std::size_t i = 1; i < report.composition_factors.size(); ++i) out = direct_sum(out, report.composition_factors[i]);
  return out;
}

SEquivalenceResult s_equivalent(const JordanHolderReport& a, const JordanHolderReport& b, const AlgebraOptions& opt) {
  SEquivalenceResult out;
  if (!a.decided || !b.decided) {
    out.detail = "Jordan-Holder series undecided";
    return out;
  }
  out.decided = true;
  if (a.kind != b.kind || a.dims != b.dims) {
    out.detail = "dimension vectors differ";
    return out;
  }
  std::vector<bool> used(b.factors.size(), false);
  std::uint64_t calls = 0;
  for (const auto& fa : a.factors) {
    bool matched = false;
    for (std::size_t j = 0; j < b.factors.size() && !matched; ++j) {
      if (used[j] || b.factors[j].object.dims != fa.object.dims) continue;
      AlgebraOptions o = opt;
      o.seed = detail::mix_seed(opt.seed, calls++);
      const auto iso = isomorphic(to_presentation(fa.object, a.kind), to_presentation(b.factors[j].object, b.kind), o);
      if (iso.status != IsoStatus::yes) continue;
      used[j] = true;
      matched = true;
      if (b.factors[j].multiplicity != fa.multiplicity) {
        out.detail = "a factor occurs with multiplicity " + std::to_string(fa.multiplicity) + " vs " +
                     std::to_string(b.factors[j].multiplicity);
        return out;
      }
    }
    if (!matched) {
      out.detail = "a composition factor of the first object does not occur in the second";
      return out;
    }
  }
  out.equivalent = std::all_of(used.begin(), used.end(), [](bool u) { return u; });
  out.detail = out.equivalent ? "same composition factors with multiplicities" : "unmatched factors in the second object";
  return out;
}

}  // namespace polydisk
