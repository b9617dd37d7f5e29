#pragma once

// Stratum lattice of a normal-crossing divisor x_1...x_r = 0 in a polydisk of
// dimension d. Strata are subsets A of {1..r}; internally a bitmask with bit
// (k-1) set when k is in A.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace polydisk {

using Mask = std::uint32_t;

/// Maximum supported divisor multiplicity; keeps the 2^r lattice tractable.
inline constexpr int kMaxMultiplicity = 16;

struct PolydiskContext {
  int ambient_dim = 0;           // d
  int divisor_multiplicity = 0;  // r

  /// Throws DomainError unless 0 <= r <= d and r <= kMaxMultiplicity.
  void check() const;
  std::size_t node_count() const { return std::size_t{1} << divisor_multiplicity; }
  Mask full_mask() const { return static_cast<Mask>(node_count() - 1); }

  friend bool operator==(const PolydiskContext&, const PolydiskContext&) = default;
};

struct StratumIndex {
  Mask mask = 0;

  int codim() const;
  bool contains(int k) const { return (mask >> (k - 1)) & 1u; }
  /// Sorted 1-based members.
  std::vector<int> elements() const;
  /// "[1,3]" style label used as a JSON key.
  std::string label() const;

  static StratumIndex from_elements(const std::vector<int>& elements, int r);
  /// Parses "[1,3]"; throws ShapeError on malformed or unsorted labels.
  static StratumIndex parse_label(const std::string& label, int r);

  friend bool operator==(const StratumIndex&, const StratumIndex&) = default;
};

/// All 2^r strata, ordered by codimension then lexicographically.
std::vector<StratumIndex> enumerate_strata(const PolydiskContext& ctx);

/// Pairs (A, k) with k in A and |A| = codim: the |A|-sheeted cover over each stratum.
std::vector<std::pair<StratumIndex, int>> cover_Y_star(const PolydiskContext& ctx, int codim);

struct UnorderedPair {
  int first;   // first < second
  int second;
  friend bool operator==(const UnorderedPair&, const UnorderedPair&) = default;
};

std::vector<std::pair<StratumIndex, UnorderedPair>> cover_Z(const PolydiskContext& ctx, int codim);

struct OrderedPairSheet {
  StratumIndex stratum;
  UnorderedPair pair;
  bool swapped;  // false: (first, second); true: (second, first)
};

/// Both orderings of every pair in cover_Z: the 2-sheeted cover of Z.
std::vector<OrderedPairSheet> cover_Z_star(const PolydiskContext& ctx, int codim);

}  // namespace polydisk
