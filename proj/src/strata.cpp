#include "polydisk/strata.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "polydisk/errors.hpp"

namespace polydisk {

void PolydiskContext::check() const {
  if (ambient_dim < 0 || divisor_multiplicity < 0 || divisor_multiplicity > ambient_dim) {
    throw DomainError("context requires 0 <= r <= d (got d=" + std::to_string(ambient_dim) +
                      ", r=" + std::to_string(divisor_multiplicity) + ")");
  }
  if (divisor_multiplicity > kMaxMultiplicity) {
    throw DomainError("divisor multiplicity " + std::to_string(divisor_multiplicity) +
                      " exceeds supported maximum " + std::to_string(kMaxMultiplicity));
  }
}

int StratumIndex::codim() const { return std::popcount(mask); }

std::vector<int> StratumIndex::elements() const {
  std::vector<int> out;
  for (int k = 1; k <= 32; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::string StratumIndex::label() const {
  std::string out = "[";
  bool first = true;
  for (int k : elements()) {
    if (!first) out += ',';
    out += std::to_string(k);
    first = false;
  }
  out += ']';
  return out;
}

StratumIndex StratumIndex::from_elements(const std::vector<int>& elements, int r) {
  StratumIndex idx;
  int prev = 0;
  for (int k : elements) {
    if (k < 1 || k > r) {
      throw ShapeError("stratum element " + std::to_string(k) + " outside 1.." + std::to_string(r));
    }
    if (k <= prev) throw ShapeError("stratum elements must be strictly increasing");
    idx.mask |= Mask{1} << (k - 1);
    prev = k;
  }
  return idx;
}

StratumIndex StratumIndex::parse_label(const std::string& label, int r) {
  if (label.size() < 2 || label.front() != '[' || label.back() != ']') {
    throw ShapeError("stratum label '" + label + "' is not of the form [i,j,...]");
  }
  std::vector<int> elems;
  const std::string body = label.substr(1, label.size() - 2);
  if (!body.empty()) {
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty() || !std::all_of(item.begin(), item.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ShapeError("stratum label '" + label + "' has a non-integer entry");
      }
      elems.push_back(std::stoi(item));
    }
  }
  return from_elements(elems, r);
}

std::vector<StratumIndex> enumerate_strata(const PolydiskContext& ctx) {
  ctx.check();
  std::vector<StratumIndex> out;
  out.reserve(ctx.node_count());
  for (Mask m = 0; m < ctx.node_count(); ++m) out.push_back(StratumIndex{m});
  std::stable_sort(out.begin(), out.end(), [](const StratumIndex& a, const StratumIndex& b) {
    if (a.codim() != b.codim()) return a.codim() < b.codim();
    return a.elements() < b.elements();
  });
  return out;
}

namespace {

void check_codim(const PolydiskContext& ctx, int codim, int lowest) {
  ctx.check();
  if (codim < lowest || codim > ctx.divisor_multiplicity) {
    throw DomainError("codimension " + std::to_string(codim) + " outside " + std::to_string(lowest) +
                      ".." + std::to_string(ctx.divisor_multiplicity));
  }
}

std::vector<StratumIndex> strata_of_codim(const PolydiskContext& ctx, int codim) {
  std::vector<StratumIndex> out;
  for (const auto& s : enumerate_strata(ctx)) {
    if (s.codim() == codim) out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<std::pair<StratumIndex, int>> cover_Y_star(const PolydiskContext& ctx, int codim) {
  check_codim(ctx, codim, 1);
  std::vector<std::pair<StratumIndex, int>> out;
  for (const auto& a : strata_of_codim(ctx, codim)) {
    for (int k : a.elements()) out.emplace_back(a, k);
  }
  return out;
}

std::vector<std::pair<StratumIndex, UnorderedPair>> cover_Z(const PolydiskContext& ctx, int codim) {
  check_codim(ctx, codim, 2);
  std::vector<std::pair<StratumIndex, UnorderedPair>> out;
  for (const auto& a : strata_of_codim(ctx, codim)) {
    const auto e = a.elements();
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = i + 1; j < e.size(); ++j) out.emplace_back(a, UnorderedPair{e[i], e[j]});
    }
  }
  return out;
}

std::vector<OrderedPairSheet> cover_Z_star(const PolydiskContext& ctx, int codim) {
  std::vector<OrderedPairSheet> out;
  for (const auto& [a, pair] : cover_Z(ctx, codim)) {
    out.push_back({a, pair, false});
    out.push_back({a, pair, true});
  }
  return out;
}

}  // namespace polydisk
