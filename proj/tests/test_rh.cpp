#include <doctest.h>

#include <algorithm>

#include "polydisk/algebra.hpp"
#include "polydisk/builders.hpp"
#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"
#include "polydisk/functor_rh.hpp"
#include "support.hpp"

using namespace polydisk;
using namespace testing_support;

namespace {

const PolydiskContext kR1{1, 1};

double cube_distance(const Hypercube& a, const Hypercube& b) {
  double worst = 0.0;
  for (Mask m = 0; m < a.node_count(); ++m)
    for (int k = 1; k <= a.r(); ++k) {
      worst = std::max(worst, frobenius_norm(a.loop(m, k) - b.loop(m, k)));
      if (StratumIndex{m}.contains(k)) {
        worst = std::max(worst, frobenius_norm(a.up_map(m, k) - b.up_map(m, k)));
        worst = std::max(worst, frobenius_norm(a.down_map(m, k) - b.down_map(m, k)));
      }
    }
  return worst;
}

Complex phi_scalar(Complex z) { return std::abs(z) < 1e-12 ? kTwoPiI : (std::exp(kTwoPiI * z) - 1.0) / z; }

Complex dphi_scalar(Complex z) {
  const Complex e = std::exp(kTwoPiI * z);
  return (kTwoPiI * e * z - (e - 1.0)) / (z * z);
}

// psi(s, t) = (t, phi(st) s) evaluated with the Taylor oracle, flattened.
std::vector<Complex> psi_oracle(const CMatrix& s, const CMatrix& t) {
  const CMatrix v = phi_oracle(s * t) * s;
  std::vector<Complex> out(t.entries().begin(), t.entries().end());
  out.insert(out.end(), v.entries().begin(), v.entries().end());
  return out;
}

// Complex rank of the holomorphic Jacobian of psi, by central differences in
// the complex coordinates.
std::size_t complex_jacobian_rank(const CMatrix& s, const CMatrix& t) {
  const double h = 1e-5;
  const std::size_t ns = s.size(), nt = t.size();
  const std::size_t outputs = psi_oracle(s, t).size();
  CMatrix jac(outputs, ns + nt);
  for (std::size_t c = 0; c < ns + nt; ++c) {
    CMatrix sp = s, sm = s, tp = t, tm = t;
    if (c < ns) {
      sp.data()[c] += h;
      sm.data()[c] -= h;
    } else {
      tp.data()[c - ns] += h;
      tm.data()[c - ns] -= h;
    }
    const auto fp = psi_oracle(sp, tp), fm = psi_oracle(sm, tm);
    for (std::size_t r = 0; r < outputs; ++r) jac(r, c) = (fp[r] - fm[r]) / (2.0 * h);
  }
  const auto sv = svd(jac).values;
  std::size_t rank = 0;
  for (double x : sv)
    if (x > 1e-5 * std::max(1.0, sv.front())) ++rank;
  return rank;
}

}  // namespace

TEST_CASE("rh of small objects") {
  const VerdierObject c = rh(constant_object(kR1, 0.25));
  const Complex i(0.0, 1.0);
  CHECK(std::abs(c.mono(0, 1)(0, 0) - i) < 1e-14);
  CHECK(std::abs(c.mono(1, 1)(0, 0) - i) < 1e-14);
  CHECK(c.C(1, 1)(0, 0) == Complex(0.25));
  CHECK(std::abs(c.V(1, 1)(0, 0) - (i - 1.0) / 0.25) < 1e-13);
  CHECK(validate(c, 1e-8).ok());

  const VerdierObject d = rh(delta_object(kR1));
  CHECK(d.dim(0) == 0);
  CHECK(std::abs(d.mono(1, 1)(0, 0) - 1.0) < 1e-15);
  CHECK(d.C(1, 1).size() == 0);

  PreDModule esnault = PreDModule::zeros({2, 2}, {2, 2, 2, 2});
  const CMatrix t1{{1.0, 0.0}, {0.0, 0.0}}, t2{{0.0, 0.0}, {0.0, 1.0}};
  for (Mask a = 0; a < 4; ++a) {
    esnault.theta(a, 1) = t1;
    esnault.theta(a, 2) = t2;
    if (a & 1u) esnault.t(a, 1) = t1, esnault.s(a, 1) = CMatrix::identity(2);
    if (a & 2u) esnault.t(a, 2) = t2, esnault.s(a, 2) = CMatrix::identity(2);
  }
  const VerdierObject ve = rh(esnault);
  CHECK(frobenius_norm(ve.mono(0, 1) - CMatrix::identity(2)) < 1e-13);
  CHECK(validate(ve, 1e-8).ok());
  // A bad object is not recovered from its image.
  const PreDModule back = inverse_rh(ve, {});
  CHECK(frobenius_norm(back.theta(0, 1)) < 1e-12);
  CHECK(isomorphic(to_presentation(back), to_presentation(esnault)).status != IsoStatus::yes);

  PreDModule broken = constant_object(kR1, 0.3);
  broken.s(1, 1) = CMatrix::scalar(2.0);
  CHECK_THROWS_AS(rh(broken), InvalidObjectError);
}

TEST_CASE("inverse rh on a nearby/vanishing pair") {
  VerdierObject v = VerdierObject::zeros(kR1, {1, 1});
  v.mono(0, 1) = v.mono(1, 1) = CMatrix::scalar(-1.0);
  v.C(1, 1) = CMatrix::scalar(-2.0);
  v.V(1, 1) = CMatrix::scalar(1.0);
  const PreDModule e = inverse_rh(v, {});
  CHECK(std::abs(e.theta(0, 1)(0, 0) - 0.5) < 1e-14);
  CHECK(e.t(1, 1)(0, 0) == Complex(-2.0));
  CHECK(std::abs(e.s(1, 1)(0, 0) + 0.25) < 1e-14);
  CHECK(std::abs(e.s(1, 1)(0, 0) * e.t(1, 1)(0, 0) - e.theta(0, 1)(0, 0)) < 1e-10);
  CHECK(validate(e, 1e-8).ok());

  const PreDModule shifted = inverse_rh(v, {-0.5});
  CHECK(std::abs(shifted.theta(0, 1)(0, 0) + 0.5) < 1e-14);
  CHECK(std::abs(shifted.s(1, 1)(0, 0) - 0.25) < 1e-14);

  CHECK_THROWS_AS(inverse_rh(v, {0.5}), DomainError);
  CHECK_THROWS_AS(inverse_rh(v, {-1.0}), DomainError);
  CHECK(frobenius_norm(inverse_rh(rh(delta_object(kR1)), {}).theta(1, 1)) < 1e-15);
}

TEST_CASE("rh round trips") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20; ++i) {
    const int r = 1 + i % 3;
    const PreDModule e = random_strip_object(r, rng);
    const VerdierObject v = rh(e);
    CHECK(validate(v, 1e-7).ok());
    CHECK(cube_distance(inverse_rh(v, {}).cube, e.cube) < 1e-7);
    CHECK(cube_distance(rh(inverse_rh(v, {})).cube, v.cube) < 1e-7);
  }
}

TEST_CASE("rh is compatible with sums and sub-objects") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 10; ++i) {
    const int r = 1 + i % 3;
    const PreDModule a = random_strip_object(r, rng);
    const PreDModule b = random_strip_object(r, rng);
    CHECK(rh(direct_sum(a, b)) == direct_sum(rh(a), rh(b)));
  }
  const auto ext = extension_object({2, 2}, 0.3, ExtensionVariant::jordan);
  const auto pre = sub_quotient(ext.object, ext.filtration.subspaces[1], 1e-8);
  const auto post = sub_quotient(rh(ext.object), ext.filtration.subspaces[1], 1e-8);
  CHECK(cube_distance(rh(pre.sub).cube, post.sub.cube) < 1e-10);
  CHECK(cube_distance(rh(pre.quotient).cube, post.quotient.cube) < 1e-10);
}

TEST_CASE("jacobian rank of psi") {
  SUBCASE("scalar points agree with the closed form") {
    for (auto [s, t] : {std::pair{Complex(1.0), Complex(0.3)}, std::pair{Complex(1.0), Complex(1.0)},
                        std::pair{Complex(0.4, 0.2), Complex(-0.7, 0.1)}}) {
      const auto jr = rh_jacobian_rank(CMatrix::scalar(s), CMatrix::scalar(t));
      CHECK(jr.full_rank_expected == 4);
      CHECK(jr.full());
      // Complex Jacobian [[0, 1], [phi'(st) t s + phi(st), phi'(st) s^2]]; realified,
      // each complex singular value appears twice.
      const Complex z = s * t;
      const CMatrix j{{0.0, 1.0}, {dphi_scalar(z) * t * s + phi_scalar(z), dphi_scalar(z) * s * s}};
      const auto expected = svd(j).values;
      REQUIRE(jr.singular_values.size() == 4);
      auto got = jr.singular_values;
      std::sort(got.begin(), got.end(), std::greater<>());
      for (std::size_t q = 0; q < 4; ++q) CHECK(got[q] == doctest::Approx(expected[q / 2]).epsilon(1e-6));
    }
  }
  SUBCASE("rank-deficient point") {
    const auto jr = rh_jacobian_rank(CMatrix{{1.0}, {0.0}}, CMatrix{{1.0, 0.0}});
    CHECK(jr.full_rank_expected == 8);
    CHECK_FALSE(jr.full());
    CHECK(jr.rank == 2 * complex_jacobian_rank(CMatrix{{1.0}, {0.0}}, CMatrix{{1.0, 0.0}}));
  }
  SUBCASE("random points match the oracle rank") {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 6; ++i) {
      const std::size_t n = 1 + i % 2, m = 1 + (i / 2) % 2;
      CMatrix s(n, m), t(m, n);
      for (auto& x : s.entries()) x = 0.5 * crandn(rng);
      for (auto& x : t.entries()) x = 0.5 * crandn(rng);
      CHECK(rh_jacobian_rank(s, t).rank == 2 * complex_jacobian_rank(s, t));
    }
  }
  SUBCASE("degenerate inputs") {
    const auto empty = rh_jacobian_rank(CMatrix(0, 0), CMatrix(0, 0));
    CHECK(empty.rank == 0);
    CHECK(empty.full());
    CHECK_THROWS_AS(rh_jacobian_rank(CMatrix::scalar(1.0), CMatrix(1, 2)), ShapeError);
    CHECK_THROWS_AS(rh_jacobian_rank(CMatrix::scalar(1.0), CMatrix::scalar(1.0), 0.0), DomainError);
  }
}
