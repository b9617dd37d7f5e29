#include "polydisk/functor_rh.hpp"

#include <algorithm>
#include <string>

#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"

namespace polydisk {

namespace {

Mask without(Mask a, int k) { return a & ~(Mask{1} << (k - 1)); }

}  // namespace

VerdierObject rh(const PreDModule& e, double tol) {
  require_valid(e, tol);
  VerdierObject v = VerdierObject::zeros(e.ctx(), e.cube.dims);
  const int r = e.r();
  // phi(Theta[B][k]) is needed once per (B, k not in B).
  std::vector<std::vector<CMatrix>> phis(e.cube.node_count(), std::vector<CMatrix>(r));
  for (Mask a = 0; a < e.cube.node_count(); ++a) {
    for (int k = 1; k <= r; ++k) {
      v.mono(a, k) = exp_2pii(e.theta(a, k));
      if (!StratumIndex{a}.contains(k)) phis[a][k - 1] = phi_matrix(e.theta(a, k));
    }
  }
  for (Mask a = 0; a < e.cube.node_count(); ++a) {
    for (int k = 1; k <= r; ++k) {
      if (!StratumIndex{a}.contains(k)) continue;
      v.C(a, k) = e.t(a, k);
      v.V(a, k) = phis[without(a, k)][k - 1] * e.s(a, k);
    }
  }
  return v;
}

PreDModule inverse_rh(const VerdierObject& v, const FundamentalDomain& domain, double tol) {
  if (!(domain.base_real > -1.0 && domain.base_real <= 0.0)) {
    throw DomainError("fundamental domain base must lie in (-1, 0], got " + std::to_string(domain.base_real));
  }
  require_valid(v, tol);
  PreDModule e = PreDModule::zeros(v.ctx(), v.cube.dims);
  const int r = v.r();
  for (Mask a = 0; a < v.cube.node_count(); ++a)
    for (int k = 1; k <= r; ++k) e.theta(a, k) = principal_log_over_2pii(v.mono(a, k), domain);
  for (Mask a = 0; a < v.cube.node_count(); ++a) {
    for (int k = 1; k <= r; ++k) {
      if (!StratumIndex{a}.contains(k)) continue;
      const Mask b = without(a, k);
      e.t(a, k) = v.C(a, k);
      e.s(a, k) = inverse(phi_matrix(e.theta(b, k))) * v.V(a, k);
    }
  }
  return e;
}

JacobianRank rh_jacobian_rank(const CMatrix& s, const CMatrix& t, double h, double tol) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  if (!(tol > 0.0)) throw DomainError("rank tolerance must be positive");
  const std::size_t n = s.rows();
  const std::size_t m = s.cols();
  if (t.rows() != m || t.cols() != n) throw ShapeError("rh_jacobian_rank: s must be n x m and t m x n");

  JacobianRank out;
  out.full_rank_expected = 4 * n * m;
  if (out.full_rank_expected == 0) return out;

  // Real coordinates: (Re s, Im s, Re t, Im t) in row-major order.
  const std::size_t nm = n * m;
  auto pack = [&](const CMatrix& a, const CMatrix& b) {
    std::vector<double> x(4 * nm);
    for (std::size_t i = 0; i < nm; ++i) {
      x[i] = a.data()[i].real();
      x[nm + i] = a.data()[i].imag();
      x[2 * nm + i] = b.data()[i].real();
      x[3 * nm + i] = b.data()[i].imag();
    }
    return x;
  };
  auto psi = [&](const std::vector<double>& x) {
    CMatrix ss(n, m);
    CMatrix tt(m, n);
    for (std::size_t i = 0; i < nm; ++i) {
      ss.data()[i] = {x[i], x[nm + i]};
      tt.data()[i] = {x[2 * nm + i], x[3 * nm + i]};
    }
    return pack(tt, phi_matrix(ss * tt) * ss);
  };

  const std::vector<double> x0 = pack(s, t);
  const std::size_t dim = x0.size();
  CMatrix jac(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    auto xp = x0;
    auto xm = x0;
    xp[j] += h;
    xm[j] -= h;
    const auto fp = psi(xp);
    const auto fm = psi(xm);
    for (std::size_t i = 0; i < dim; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  out.singular_values = svd(jac).values;
  const double cut = tol * std::max(1.0, out.singular_values.front());
  out.rank = static_cast<std::size_t>(
      std::count_if(out.singular_values.begin(), out.singular_values.end(), [&](double v) { return v > cut; }));
  return out;
}

}  // namespace polydisk
