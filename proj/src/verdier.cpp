#include "polydisk/verdier.hpp"

#include <algorithm>

#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"

namespace polydisk {

ValidationReport validate(const VerdierObject& v, double tol) { return validate_cube(v.cube, ObjectKind::verdier, tol); }

void require_valid(const VerdierObject& v, double tol) {
  const auto report = validate(v, tol);
  if (!report.ok()) throw InvalidObjectError("not a Verdier object: " + describe(report.violations.front()));
}

ValidationReport monodromy_consistency(const VerdierObject& v, double tol) {
  v.cube.check_shapes();
  ValidationReport report;
  for (Mask a = 0; a < v.cube.node_count(); ++a) {
    for (int k = 1; k <= v.r(); ++k) {
      if (!StratumIndex{a}.contains(k)) continue;
      const CMatrix expected = v.C(a, k) * v.V(a, k) + CMatrix::identity(v.dim(a));
      const double res = scaled_difference(v.mono(a, k), expected);
      if (!(res <= tol)) report.violations.push_back({"monodromy-consistency", a, k, 0, res});
    }
  }
  return report;
}

VerdierObject direct_sum(const VerdierObject& a, const VerdierObject& b) { return {direct_sum(a.cube, b.cube)}; }

VerdierObject change_basis(const VerdierObject& v, const std::vector<CMatrix>& g) { return {change_basis(v.cube, g)}; }

VerdierSubQuotient sub_quotient(const VerdierObject& v, const SubspaceFamily& spans, double tol) {
  auto sq = sub_quotient(v.cube, spans, ObjectKind::verdier, tol);
  return {{std::move(sq.sub)}, {std::move(sq.quotient)}, std::move(sq.sub_basis), std::move(sq.complement_basis)};
}

VerdierObject degenerate(const VerdierObject& v, const Filtration& filt, Complex tau, double tol) {
  return {degenerate(v.cube, filt, tau, ObjectKind::verdier, tol)};
}

VerdierObject verdier_from_local_system(const PolydiskContext& ctx, const std::vector<CMatrix>& monodromies,
                                        double tol) {
  ctx.check();
  const int r = ctx.divisor_multiplicity;
  if (static_cast<int>(monodromies.size()) != r) throw ShapeError("need exactly r monodromies");
  const std::size_t n = r > 0 ? monodromies.front().rows() : 0;
  for (int k = 0; k < r; ++k) {
    const CMatrix& m = monodromies[k];
    if (!m.is_square() || m.rows() != n) throw ShapeError("monodromies must be square of equal size");
    if (n > 0 && min_singular_value(m) <= 1e-12 * std::max(1.0, spectral_norm(m))) {
      throw DomainError("monodromy " + std::to_string(k + 1) + " is singular");
    }
    for (int j = 0; j < k; ++j) {
      if (commute_residual(m, monodromies[j]) > tol) {
        throw DomainError("monodromies " + std::to_string(j + 1) + " and " + std::to_string(k + 1) +
                          " do not commute");
      }
    }
  }
  VerdierObject v = VerdierObject::zeros(ctx, std::vector<std::size_t>(ctx.node_count(), n));
  const CMatrix id = CMatrix::identity(n);
  for (Mask a = 0; a < ctx.node_count(); ++a) {
    for (int k = 1; k <= r; ++k) {
      v.mono(a, k) = monodromies[k - 1];
      if (StratumIndex{a}.contains(k)) {
        v.C(a, k) = monodromies[k - 1] - id;
        v.V(a, k) = id;
      }
    }
  }
  return v;
}

VerdierObject external_product(const VerdierObject& e, const VerdierObject& f) {
  return {external_product(e.cube, f.cube)};
}

}  // namespace polydisk
