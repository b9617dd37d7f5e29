#include "polydisk/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"

namespace polydisk {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMaxTaylorTerms = 400;

// exp(w) - 1 without cancellation for small |w|.
Complex expm1_complex(Complex w) {
  const double x = w.real();
  const double y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

/// A scalar function together with what the Schur-Parlett driver needs.
struct ScalarFunction {
  // Eigenvalues whose keys lie within cluster_radius (transitively) share a
  // diagonal block.
  std::function<Complex(Complex)> key;
  double cluster_radius;
  std::function<Complex(Complex)> value;
  // Taylor coefficients about `center`, on the branch containing `center_key`.
  std::function<std::vector<Complex>(Complex center, Complex center_key, std::size_t count)> taylor;
  const char* name;
};

// --- Taylor coefficients ----------------------------------------------------

std::vector<Complex> exp_2pii_taylor(Complex center, std::size_t count) {
  std::vector<Complex> c(count);
  Complex term = std::exp(kTwoPiI * center);
  for (std::size_t k = 0; k < count; ++k) {
    c[k] = term;
    term *= kTwoPiI / static_cast<double>(k + 1);
  }
  return c;
}

// phi(center + w) = sum_k c_k w^k.
std::vector<Complex> phi_taylor(Complex center, std::size_t count) {
  std::vector<Complex> c(count);
  if (std::abs(center) < 1.0) {
    // c_k = (2 pi i)^{k+1} / k! * int_0^1 s^k exp(a s) ds,  a = 2 pi i center,
    // with the integral summed as sum_m a^m / (m! (k + m + 1)).
    const Complex a = kTwoPiI * center;
    std::vector<Complex> powers;  // a^m / m!
    Complex p = 1.0;
    for (std::size_t m = 0; m < 200; ++m) {
      powers.push_back(p);
      p *= a / static_cast<double>(m + 1);
      if (m > 8 && std::abs(p) < 1e-19) break;
    }
    Complex scale = kTwoPiI;  // (2 pi i)^{k+1} / k!
    for (std::size_t k = 0; k < count; ++k) {
      Complex integral = 0.0;
      for (std::size_t m = powers.size(); m-- > 0;) integral += powers[m] / static_cast<double>(k + m + 1);
      c[k] = scale * integral;
      scale *= kTwoPiI / static_cast<double>(k + 1);
    }
    return c;
  }
  // center * c_k + c_{k-1} = g_k where g = exp(2 pi i z) - 1; stable for |center| >= 1.
  const auto g = exp_2pii_taylor(center, count);
  for (std::size_t k = 0; k < count; ++k) {
    const Complex gk = (k == 0) ? expm1_complex(kTwoPiI * center) : g[k];
    c[k] = (gk - (k ? c[k - 1] : Complex{0.0})) / center;
  }
  return c;
}

// --- Schur reordering ---------------------------------------------------------

// Swap diagonal entries k and k+1 of upper-triangular t by a unitary rotation,
// accumulating it into q.
void swap_adjacent(CMatrix& t, CMatrix& q, std::size_t k) {
  const std::size_t n = t.rows();
  const Complex a = t(k, k);
  const Complex c = t(k + 1, k + 1);
  Complex v1 = t(k, k + 1);
  Complex v2 = c - a;
  const double nv = std::hypot(std::abs(v1), std::abs(v2));
  if (nv == 0.0) return;
  v1 /= nv;
  v2 /= nv;
  // G = [v, w], v = (v1, v2) eigenvector for c, w = (-conj v2, conj v1).
  const Complex g00 = v1, g10 = v2, g01 = -std::conj(v2), g11 = std::conj(v1);
  // Rows: T <- G^* T.
  for (std::size_t j = 0; j < n; ++j) {
    const Complex x = t(k, j);
    const Complex y = t(k + 1, j);
    t(k, j) = std::conj(g00) * x + std::conj(g10) * y;
    t(k + 1, j) = std::conj(g01) * x + std::conj(g11) * y;
  }
  // Columns: T <- T G and Q <- Q G.
  auto rotate_columns = [&](CMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const Complex x = m(i, k);
      const Complex y = m(i, k + 1);
      m(i, k) = x * g00 + y * g10;
      m(i, k + 1) = x * g01 + y * g11;
    }
  };
  rotate_columns(t);
  rotate_columns(q);
  t(k, k) = c;
  t(k + 1, k + 1) = a;
  t(k + 1, k) = 0.0;
}

// --- Block pieces -------------------------------------------------------------

CMatrix taylor_block(const CMatrix& tb, const std::vector<Complex>& keys, const ScalarFunction& f) {
  const std::size_t m = tb.rows();
  Complex center = 0.0;
  Complex center_key = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    center += tb(i, i);
    center_key += keys[i];
  }
  center /= static_cast<double>(m);
  center_key /= static_cast<double>(m);
  const auto coeff = f.taylor(center, center_key, kMaxTaylorTerms);
  const CMatrix x = shifted(tb, center);

  CMatrix result = CMatrix::identity(m) * coeff[0];
  CMatrix power = CMatrix::identity(m);
  std::size_t quiet = 0;
  for (std::size_t k = 1; k < kMaxTaylorTerms; ++k) {
    power = power * x;
    const double pnorm = max_abs(power);
    if (pnorm == 0.0) return result;
    const CMatrix term = power * coeff[k];
    result += term;
    const double tnorm = max_abs(term);
    quiet = (tnorm <= kEps * max_abs(result)) ? quiet + 1 : 0;
    if (k >= m && quiet >= 3) return result;
  }
  throw NumericalError(std::string("Taylor expansion of ") + f.name +
                           " did not converge on an eigenvalue cluster (block norm " +
                           std::to_string(frobenius_norm(x)) + ")",
                       frobenius_norm(x));
}

// Solves a x - x b = c for upper-triangular a (m x m) and b (n x n).
CMatrix solve_triangular_sylvester(const CMatrix& a, const CMatrix& b, const CMatrix& c, const char* name) {
  const std::size_t m = a.rows();
  const std::size_t n = b.rows();
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  CMatrix x(m, n);
  for (std::size_t l = 0; l < n; ++l) {
    std::vector<Complex> rhs(m);
    for (std::size_t p = 0; p < m; ++p) {
      rhs[p] = c(p, l);
      for (std::size_t q = 0; q < l; ++q) rhs[p] += x(p, q) * b(q, l);
    }
    for (std::size_t p = m; p-- > 0;) {
      Complex acc = rhs[p];
      for (std::size_t q = p + 1; q < m; ++q) acc -= a(p, q) * x(q, l);
      const Complex diag = a(p, p) - b(l, l);
      if (std::abs(diag) <= 1e3 * kEps * scale) {
        throw NumericalError(std::string("block Parlett recurrence for ") + name +
                                 " hit nearly equal eigenvalues in different clusters",
                             scale / std::max(std::abs(diag), std::numeric_limits<double>::min()));
      }
      x(p, l) = acc / diag;
    }
  }
  return x;
}

// --- Driver -------------------------------------------------------------------

CMatrix evaluate_connected(const CMatrix& a, const ScalarFunction& f) {
  const std::size_t n = a.rows();
  if (n == 1) return CMatrix::scalar(f.value(a(0, 0)));

  SchurForm sf = schur(a);
  CMatrix& t = sf.triangular;
  CMatrix& q = sf.unitary;

  // Cluster eigenvalues by key proximity (transitive closure).
  std::vector<Complex> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = f.key(t(i, i));
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(keys[i] - keys[j]) <= f.cluster_radius) parent[find(i)] = find(j);

  // Rank clusters by first appearance, then bubble them contiguous.
  std::vector<std::size_t> cluster_rank(n, n);
  std::size_t next_rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = cluster_rank[find(i)];
    if (r == n) r = next_rank++;
  }
  std::vector<std::size_t> rank_at(n);
  for (std::size_t i = 0; i < n; ++i) rank_at[i] = cluster_rank[find(i)];
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (rank_at[k] > rank_at[k + 1]) {
        swap_adjacent(t, q, k);
        std::swap(rank_at[k], rank_at[k + 1]);
        std::swap(keys[k], keys[k + 1]);
        swapped = true;
      }
    }
  }

  std::vector<std::size_t> start{0};
  for (std::size_t i = 1; i < n; ++i)
    if (rank_at[i] != rank_at[i - 1]) start.push_back(i);
  start.push_back(n);
  const std::size_t nb = start.size() - 1;
  auto bsize = [&](std::size_t b) { return start[b + 1] - start[b]; };
  auto tblock = [&](std::size_t i, std::size_t j) { return t.block(start[i], start[j], bsize(i), bsize(j)); };

  std::vector<std::vector<CMatrix>> fb(nb, std::vector<CMatrix>(nb));
  for (std::size_t j = 0; j < nb; ++j) {
    const CMatrix tjj = tblock(j, j);
    if (bsize(j) == 1) {
      fb[j][j] = CMatrix::scalar(f.value(tjj(0, 0)));
    } else {
      fb[j][j] = taylor_block(tjj, std::vector<Complex>(keys.begin() + start[j], keys.begin() + start[j + 1]), f);
    }
    for (std::size_t i = j; i-- > 0;) {
      CMatrix rhs(bsize(i), bsize(j));
      for (std::size_t k = i; k < j; ++k) rhs += fb[i][k] * tblock(k, j);
      for (std::size_t k = i + 1; k <= j; ++k) rhs -= tblock(i, k) * fb[k][j];
      fb[i][j] = solve_triangular_sylvester(tblock(i, i), tjj, rhs, f.name);
    }
  }

  CMatrix ft(n, n);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i; j < nb; ++j) ft.set_block(start[i], start[j], fb[i][j]);
  return q * ft * q.adjoint();
}

CMatrix evaluate(const CMatrix& a, const ScalarFunction& f) {
  if (!a.is_square()) throw ShapeError(std::string(f.name) + ": matrix is not square");
  if (!all_finite(a)) throw ShapeError(std::string(f.name) + ": matrix has non-finite entries");
  const std::size_t n = a.rows();
  if (n == 0) return a;

  // Connected components of the symmetric sparsity graph.
  std::vector<std::size_t> comp(n, n);
  std::size_t ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (comp[j] == n && (a(i, j) != 0.0 || a(j, i) != 0.0)) {
          comp[j] = ncomp;
          stack.push_back(j);
        }
      }
    }
    ++ncomp;
  }
  if (ncomp == 1) return evaluate_connected(a, f);

  CMatrix out(n, n);
  for (std::size_t c = 0; c < ncomp; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (comp[i] == c) idx.push_back(i);
    CMatrix sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = a(idx[i], idx[j]);
    const CMatrix fs = evaluate_connected(sub, f);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) out(idx[i], idx[j]) = fs(i, j);
  }
  return out;
}

Complex identity_key(Complex z) { return z; }

const ScalarFunction& phi_function() {
  static const ScalarFunction f{
      &identity_key, 0.1, [](Complex z) { return phi(z); },
      [](Complex center, Complex, std::size_t count) { return phi_taylor(center, count); }, "phi"};
  return f;
}

const ScalarFunction& exp_function() {
  static const ScalarFunction f{
      &identity_key, 0.1, [](Complex z) { return exp_2pii(z); },
      [](Complex center, Complex, std::size_t count) { return exp_2pii_taylor(center, count); }, "exp(2 pi i .)"};
  return f;
}

}  // namespace

Complex FundamentalDomain::reduce(Complex z) const {
  Complex out = z + std::ceil(base_real - z.real());
  // Guard the half-open boundary against rounding in the shift.
  if (out.real() >= base_real + 1.0) out -= 1.0;
  if (out.real() < base_real) out += 1.0;
  return out;
}

Complex phi(Complex z) {
  if (z == Complex{0.0}) return kTwoPiI;
  if (std::abs(z) < 1e-3) {
    // Few-term series: phi(z) = sum_m (2 pi i)^{m+1} z^m / (m+1)!
    Complex term = kTwoPiI;
    Complex sum = 0.0;
    for (int m = 0; m < 12; ++m) {
      sum += term;
      term *= kTwoPiI * z / static_cast<double>(m + 2);
    }
    return sum;
  }
  return expm1_complex(kTwoPiI * z) / z;
}

Complex exp_2pii(Complex z) { return std::exp(kTwoPiI * z); }

CMatrix phi_matrix(const CMatrix& theta) { return evaluate(theta, phi_function()); }

CMatrix exp_2pii(const CMatrix& theta) { return evaluate(theta, exp_function()); }

CMatrix principal_log_over_2pii(const CMatrix& m, const FundamentalDomain& domain, double singular_tol) {
  if (!m.is_square()) throw ShapeError("principal_log_over_2pii: matrix is not square");
  if (m.rows() == 0) return m;
  if (!all_finite(m)) throw ShapeError("principal_log_over_2pii: matrix has non-finite entries");
  const auto sv = svd(m);
  if (sv.values.back() <= singular_tol * std::max(1.0, sv.values.front())) {
    const double cond = sv.values.back() > 0.0 ? sv.values.front() / sv.values.back() : INFINITY;
    throw NumericalError("principal_log_over_2pii: matrix is singular (condition estimate " + std::to_string(cond) + ")",
                         cond);
  }

  // Eigenvalues of m within ~1e-9 of the strip's lower edge (an integer shift of
  // it) stay on that edge: rounding in a defective eigenvalue must not send
  // part of a Jordan block to the other side of the strip.
  auto branch = [domain](Complex w) {
    const Complex u = std::log(w) / kTwoPiI;
    const double offset = u.real() - domain.base_real;
    const double n = std::round(offset);
    if (std::abs(offset - n) <= 1e-9) return u - n;
    return domain.reduce(u);
  };
  // Clusters are formed in the w-plane so the branch cut of the strip cannot split one.
  const ScalarFunction f{
      &identity_key,
      0.02,
      branch,
      [branch](Complex center, Complex, std::size_t count) {
        std::vector<Complex> c(count);
        c[0] = branch(center);
        Complex ratio = 1.0;
        for (std::size_t k = 1; k < count; ++k) {
          ratio /= center;
          c[k] = ratio * ((k % 2 ? 1.0 : -1.0) / static_cast<double>(k)) / kTwoPiI;
        }
        return c;
      },
      "log/(2 pi i)"};
  return evaluate(m, f);
}

}  // namespace polydisk
