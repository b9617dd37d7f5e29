#include "polydisk/predmod.hpp"

#include <cmath>

#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"

namespace polydisk {

ValidationReport validate(const PreDModule& e, double tol) { return validate_cube(e.cube, ObjectKind::pre_d_module, tol); }

void require_valid(const PreDModule& e, double tol) {
  const auto report = validate(e, tol);
  if (!report.ok()) throw InvalidObjectError("not a pre-D-module: " + describe(report.violations.front()));
}

namespace {

struct PooledEigenvalue {
  Complex value;
  Mask stratum;  // A
  int k;
};

}  // namespace

GoodEigenvalueResult good_residual_eigenvalues(const PreDModule& e, double tol, double validate_tol) {
  require_valid(e, validate_tol);
  GoodEigenvalueResult out;
  for (int level = 1; level <= e.r(); ++level) {
    std::vector<PooledEigenvalue> pool;
    for (const auto& [a, k] : cover_Y_star(e.ctx(), level)) {
      const Mask b = a.mask & ~(Mask{1} << (k - 1));
      for (Complex z : eigenvalues(e.theta(b, k))) pool.push_back({z, a.mask, k});
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        const Complex d = pool[i].value - pool[j].value;
        const double n = std::round(d.real());
        if (n == 0.0 || std::abs(d - n) > tol) continue;
        const auto& hi = n > 0 ? pool[i] : pool[j];
        const auto& lo = n > 0 ? pool[j] : pool[i];
        out.good = false;
        out.witness = {level, hi.stratum, hi.k, lo.stratum, lo.k, hi.value, lo.value};
        return out;
      }
    }
  }
  return out;
}

PreDModule direct_sum(const PreDModule& a, const PreDModule& b) { return {direct_sum(a.cube, b.cube)}; }

PreDModule change_basis(const PreDModule& e, const std::vector<CMatrix>& g) { return {change_basis(e.cube, g)}; }

PreDSubQuotient sub_quotient(const PreDModule& e, const SubspaceFamily& spans, double tol) {
  auto sq = sub_quotient(e.cube, spans, ObjectKind::pre_d_module, tol);
  return {{std::move(sq.sub)}, {std::move(sq.quotient)}, std::move(sq.sub_basis), std::move(sq.complement_basis)};
}

PreDModule degenerate(const PreDModule& e, const Filtration& filt, Complex tau, double tol) {
  return {degenerate(e.cube, filt, tau, ObjectKind::pre_d_module, tol)};
}

PreDModule from_local_system(const PolydiskContext& ctx, const std::vector<CMatrix>& monodromies,
                             const FundamentalDomain& domain, ArrowStyle style, double tol) {
  ctx.check();
  const int r = ctx.divisor_multiplicity;
  if (static_cast<int>(monodromies.size()) != r) throw ShapeError("need exactly r monodromies");
  const std::size_t n = r > 0 ? monodromies.front().rows() : 0;
  std::vector<CMatrix> theta;
  for (int k = 0; k < r; ++k) {
    const CMatrix& m = monodromies[k];
    if (!m.is_square() || m.rows() != n) throw ShapeError("monodromies must be square of equal size");
    for (int j = 0; j < k; ++j) {
      const double res = commute_residual(m, monodromies[j]);
      if (res > tol) {
        throw DomainError("monodromies " + std::to_string(j + 1) + " and " + std::to_string(k + 1) +
                          " do not commute (residual " + std::to_string(res) + ")");
      }
    }
    theta.push_back(principal_log_over_2pii(m, domain));
  }
  PreDModule e = PreDModule::zeros(ctx, std::vector<std::size_t>(ctx.node_count(), n));
  const CMatrix id = CMatrix::identity(n);
  for (Mask a = 0; a < ctx.node_count(); ++a) {
    for (int k = 1; k <= r; ++k) {
      e.theta(a, k) = theta[k - 1];
      if (StratumIndex{a}.contains(k)) {
        e.t(a, k) = style == ArrowStyle::t_is_theta ? theta[k - 1] : id;
        e.s(a, k) = style == ArrowStyle::t_is_theta ? id : theta[k - 1];
      }
    }
  }
  return e;
}

PreDModule external_product(const PreDModule& e, const PreDModule& f) { return {external_product(e.cube, f.cube)}; }

}  // namespace polydisk
