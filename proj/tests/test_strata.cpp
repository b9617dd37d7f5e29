#include <doctest.h>

#include <set>

#include "polydisk/errors.hpp"
#include "polydisk/strata.hpp"

using namespace polydisk;

namespace {

int binom(int n, int k) {
  int out = 1;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

}  // namespace

TEST_CASE("enumerate_strata orders by codim then lexicographically") {
  CHECK(enumerate_strata({2, 0}).size() == 1);
  CHECK(enumerate_strata({2, 0}).front().label() == "[]");

  const auto s = enumerate_strata({2, 2});
  REQUIRE(s.size() == 4);
  CHECK(s[0].label() == "[]");
  CHECK(s[1].label() == "[1]");
  CHECK(s[2].label() == "[2]");
  CHECK(s[3].label() == "[1,2]");

  const auto s3 = enumerate_strata({3, 3});
  REQUIRE(s3.size() == 8);
  int by_codim[4] = {0, 0, 0, 0};
  for (const auto& a : s3) ++by_codim[a.codim()];
  CHECK(by_codim[1] == 3);
  CHECK(by_codim[2] == 3);
  CHECK(by_codim[3] == 1);
  CHECK(s3[4].label() == "[1,2]");
  CHECK(s3[5].label() == "[1,3]");
  CHECK(s3[6].label() == "[2,3]");
}

TEST_CASE("enumeration size is 2^r and deterministic") {
  for (int r = 0; r <= 6; ++r) {
    const auto a = enumerate_strata({r, r});
    CHECK(a.size() == (std::size_t{1} << r));
    CHECK(a == enumerate_strata({r, r}));
    std::set<Mask> masks;
    for (const auto& s : a) masks.insert(s.mask);
    CHECK(masks.size() == a.size());
  }
}

TEST_CASE("cover_Y_star") {
  const auto c1 = cover_Y_star({2, 2}, 1);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0].first.label() == "[1]");
  CHECK(c1[0].second == 1);
  CHECK(c1[1].first.label() == "[2]");
  CHECK(c1[1].second == 2);

  const auto c2 = cover_Y_star({2, 2}, 2);
  REQUIRE(c2.size() == 2);
  CHECK(c2[0].first.label() == "[1,2]");
  CHECK(c2[0].second == 1);
  CHECK(c2[1].second == 2);

  // Independent count: subsets of size c times c sheets each.
  for (int r = 1; r <= 5; ++r)
    for (int c = 1; c <= r; ++c) CHECK(cover_Y_star({r, r}, c).size() == static_cast<std::size_t>(binom(r, c) * c));
  CHECK(cover_Y_star({3, 3}, 2).size() == 6);

  CHECK_THROWS_AS(cover_Y_star({2, 2}, 0), DomainError);
  CHECK_THROWS_AS(cover_Y_star({2, 2}, 3), DomainError);
}

TEST_CASE("cover_Z and its double cover") {
  const auto z = cover_Z({2, 2}, 2);
  REQUIRE(z.size() == 1);
  CHECK(z[0].first.label() == "[1,2]");
  CHECK(z[0].second == UnorderedPair{1, 2});
  CHECK(cover_Z_star({2, 2}, 2).size() == 2);
  CHECK(cover_Z({3, 3}, 3).size() == 3);
  CHECK(cover_Z({4, 4}, 3).size() == 12);

  for (int r = 2; r <= 5; ++r) {
    for (int c = 2; c <= r; ++c) {
      const auto zz = cover_Z({r, r}, c);
      CHECK(zz.size() == static_cast<std::size_t>(binom(r, c) * binom(c, 2)));
      const auto zs = cover_Z_star({r, r}, c);
      CHECK(zs.size() == 2 * zz.size());
      for (const auto& [a, p] : zz) {
        CHECK(p.first < p.second);
        CHECK(a.contains(p.first));
        CHECK(a.contains(p.second));
      }
    }
  }
  CHECK_THROWS_AS(cover_Z({2, 2}, 1), DomainError);
  CHECK_THROWS_AS(cover_Z_star({3, 3}, 4), DomainError);
}

TEST_CASE("labels round trip and reject junk") {
  for (const auto& a : enumerate_strata({4, 4})) CHECK(StratumIndex::parse_label(a.label(), 4) == a);
  CHECK(StratumIndex::from_elements({1, 3}, 3).label() == "[1,3]");
  CHECK_THROWS_AS(StratumIndex::from_elements({3, 1}, 3), ShapeError);
  CHECK_THROWS_AS(StratumIndex::parse_label("[2,1]", 3), ShapeError);
  CHECK_THROWS_AS(StratumIndex::parse_label("[1,1]", 3), ShapeError);
  CHECK_THROWS_AS(StratumIndex::parse_label("[4]", 3), ShapeError);
  CHECK_THROWS_AS(StratumIndex::parse_label("1,2", 3), ShapeError);
}

TEST_CASE("context bounds") {
  CHECK_NOTHROW((PolydiskContext{0, 0}.check()));
  CHECK_THROWS_AS((PolydiskContext{1, 2}.check()), DomainError);
  CHECK_THROWS_AS((PolydiskContext{2, -1}.check()), DomainError);
}
