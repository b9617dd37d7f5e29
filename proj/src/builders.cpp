#include "polydisk/builders.hpp"

#include <cmath>
#include <sstream>

#include "polydisk/decomp.hpp"
#include "polydisk/errors.hpp"
#include "polydisk/functor_rh.hpp"

namespace polydisk {

namespace {

PolydiskContext one_direction() { return {1, 1}; }

Complex gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  return {re, nd(rng)};
}

PreDModule with_context(PreDModule e, const PolydiskContext& ctx) {
  e.cube.ctx = ctx;
  e.cube.check_shapes();
  return e;
}

}  // namespace

PreDModule atom_object(const Atom& atom) {
  switch (atom.type) {
    case Atom::Type::constant: {
      PreDModule e = PreDModule::zeros(one_direction(), {1, 1});
      e.theta(0, 1) = CMatrix::scalar(atom.alpha);
      e.theta(1, 1) = CMatrix::scalar(atom.alpha);
      e.t(1, 1) = CMatrix::scalar(atom.alpha);
      e.s(1, 1) = CMatrix::scalar(1.0);
      return e;
    }
    case Atom::Type::delta:
      return PreDModule::zeros(one_direction(), {0, 1});
    case Atom::Type::codelta:
      return PreDModule::zeros(one_direction(), {1, 0});
  }
  throw DomainError("unknown atom");
}

PreDModule atom_product(const PolydiskContext& ctx, const std::vector<Atom>& atoms) {
  ctx.check();
  if (static_cast<int>(atoms.size()) != ctx.divisor_multiplicity) throw DomainError("need one atom per direction");
  PreDModule e = PreDModule::zeros({0, 0}, {1});
  for (const auto& atom : atoms) e = external_product(e, atom_object(atom));
  return with_context(std::move(e), ctx);
}

PreDModule delta_object(const PolydiskContext& ctx) {
  return atom_product(ctx, std::vector<Atom>(ctx.divisor_multiplicity, Atom{Atom::Type::delta, 0.0}));
}

PreDModule constant_object(const PolydiskContext& ctx, Complex alpha) {
  return atom_product(ctx, std::vector<Atom>(ctx.divisor_multiplicity, Atom{Atom::Type::constant, alpha}));
}

BuiltExtension extension_object(const PolydiskContext& ctx, Complex alpha, ExtensionVariant variant) {
  ctx.check();
  if (ctx.divisor_multiplicity < 1) throw DomainError("extension needs r >= 1");
  PreDModule core;
  if (variant == ExtensionVariant::delta) {
    if (alpha != Complex{0.0}) {
      throw DomainError("extensions of constant(alpha) by delta split unless alpha = 0");
    }
    core = PreDModule::zeros(one_direction(), {1, 2});
    core.t(1, 1) = CMatrix{{1.0}, {0.0}};
    core.s(1, 1) = CMatrix{{0.0, 1.0}};
    core.theta(1, 1) = CMatrix{{0.0, 1.0}, {0.0, 0.0}};
  } else {
    core = PreDModule::zeros(one_direction(), {2, 2});
    const CMatrix theta = CMatrix{{alpha, 1.0}, {0.0, alpha}};
    core.theta(0, 1) = theta;
    core.theta(1, 1) = theta;
    core.t(1, 1) = theta;
    core.s(1, 1) = CMatrix::identity(2);
  }
  PreDModule e = core;
  for (int k = 2; k <= ctx.divisor_multiplicity; ++k) e = external_product(e, atom_object({Atom::Type::constant, alpha}));
  e = with_context(std::move(e), ctx);

  // The sub-object is spanned by e1 wherever the core has it: every node for
  // the Jordan variant, the nodes containing 1 for the delta variant.
  Filtration f;
  f.grades = {0, 1, 2};
  SubspaceFamily zero(e.cube.node_count()), sub(e.cube.node_count()), all(e.cube.node_count());
  for (Mask a = 0; a < e.cube.node_count(); ++a) {
    const std::size_t n = e.dim(a);
    zero[a] = CMatrix(n, 0);
    all[a] = CMatrix::identity(n);
    const bool in_sub = variant == ExtensionVariant::jordan || StratumIndex{a}.contains(1);
    sub[a] = CMatrix(n, in_sub ? 1 : 0);
    if (in_sub) sub[a](0, 0) = 1.0;  // other directions are 1-dimensional, so e1 stays first
  }
  f.subspaces = {zero, sub, all};
  return {std::move(e), std::move(f)};
}

CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  CMatrix m(rows, cols);
  for (auto& z : m.entries()) z = gaussian(rng);
  return m;
}

std::vector<CMatrix> random_commuting_monodromies(int r, std::size_t n, std::mt19937_64& rng,
                                                  const FundamentalDomain& domain) {
  std::vector<CMatrix> out;
  if (n == 0) return std::vector<CMatrix>(r, CMatrix(0, 0));
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const CMatrix b = random_matrix(n, n, rng) * Complex(1.0 / std::sqrt(static_cast<double>(n)));
    const CMatrix b2 = b * b;
    out.clear();
    bool ok = true;
    for (int k = 0; k < r && ok; ++k) {
      const Complex c0 = gaussian(rng), c1 = gaussian(rng) * 0.5, c2 = gaussian(rng) * 0.25;
      CMatrix m = CMatrix::identity(n) * c0 + b * c1 + b2 * c2;
      const auto sv = svd(m).values;
      ok = sv.back() > 1e-2 * sv.front() && sv.back() > 1e-2;
      for (Complex z : eigenvalues(m)) {
        const double x = std::arg(z) / (2.0 * kPi) - domain.base_real;
        const double frac = x - std::floor(x);
        ok = ok && frac > 1e-3 && frac < 1.0 - 1e-3;
      }
      out.push_back(std::move(m));
    }
    if (ok) return out;
  }
  throw NumericalError("could not draw well-conditioned commuting monodromies");
}

std::vector<CMatrix> random_basis_change(const std::vector<std::size_t>& dims, std::mt19937_64& rng) {
  std::vector<CMatrix> out;
  for (std::size_t n : dims) {
    for (;;) {
      CMatrix g = CMatrix::identity(n) + random_matrix(n, n, rng) * Complex(0.5 / std::sqrt(std::max<std::size_t>(n, 1)));
      if (n == 0) {
        out.push_back(g);
        break;
      }
      const auto sv = svd(g).values;
      if (sv.back() > 0.1 * sv.front()) {
        out.push_back(std::move(g));
        break;
      }
    }
  }
  return out;
}

Complex parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) throw DomainError("empty complex number");
  try {
    const auto comma = s.find(',');
    if (comma != std::string::npos) {
      std::size_t p1 = 0, p2 = 0;
      const double re = std::stod(s.substr(0, comma), &p1);
      const std::string im_text = s.substr(comma + 1);
      const double im = std::stod(im_text, &p2);
      if (p1 != comma || p2 != im_text.size()) throw DomainError("");
      return {re, im};
    }
    if (s.back() == 'i') {
      // a+bi, a-bi, bi
      const std::string body = s.substr(0, s.size() - 1);
      std::size_t split = std::string::npos;
      for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
          split = i;
          break;
        }
      }
      if (split == std::string::npos) {
        const std::string im_text = body.empty() || body == "+" || body == "-" ? body + "1" : body;
        std::size_t p = 0;
        const double im = std::stod(im_text, &p);
        if (p != im_text.size()) throw DomainError("");
        return {0.0, im};
      }
      std::size_t p1 = 0, p2 = 0;
      const std::string re_text = body.substr(0, split);
      std::string im_text = body.substr(split);
      if (im_text == "+" || im_text == "-") im_text += "1";
      const double re = std::stod(re_text, &p1);
      const double im = std::stod(im_text, &p2);
      if (p1 != re_text.size() || p2 != im_text.size()) throw DomainError("");
      return {re, im};
    }
    std::size_t p = 0;
    const double re = std::stod(s, &p);
    if (p != s.size()) throw DomainError("");
    return {re, 0.0};
  } catch (const std::exception&) {
    throw DomainError("cannot parse complex number '" + text + "'");
  }
}

BuilderParams with_overrides(const BuilderParams& base, const std::string& overrides) {
  BuilderParams p = base;
  std::stringstream ss(overrides);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw DomainError("expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n") {
        p.n = std::stoul(value);
      } else if (key == "alpha") {
        p.alpha = parse_complex(value);
        p.alpha_given = true;
      } else if (key == "variant") {
        p.variant = value;
      } else if (key == "sigma") {
        p.sigma = std::stod(value);
      } else if (key == "seed") {
        p.seed = std::stoull(value);
      } else if (key == "r") {
        p.ctx.divisor_multiplicity = std::stoi(value);
        p.ctx.ambient_dim = std::max(p.ctx.ambient_dim, p.ctx.divisor_multiplicity);
      } else if (key == "d") {
        p.ctx.ambient_dim = std::stoi(value);
      } else {
        throw DomainError("unknown builder parameter '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw DomainError("bad value for builder parameter '" + key + "': '" + value + "'");
    }
  }
  return p;
}

namespace {

std::pair<std::string, BuilderParams> split_part(const std::string& part, const BuilderParams& base) {
  const auto colon = part.find(':');
  if (colon == std::string::npos) return {part, base};
  return {part.substr(0, colon), with_overrides(base, part.substr(colon + 1))};
}

Atom parse_atom(const std::string& part, const BuilderParams& base) {
  const auto [name, p] = split_part(part, base);
  if (name == "constant") return {Atom::Type::constant, p.alpha};
  if (name == "delta") return {Atom::Type::delta, 0.0};
  if (name == "codelta") return {Atom::Type::codelta, 0.0};
  throw DomainError("unknown atom '" + name + "' (expected constant, delta or codelta)");
}

ExtensionVariant extension_variant(const BuilderParams& p) {
  if (p.variant.empty()) return (p.alpha_given && p.alpha != Complex{0.0}) ? ExtensionVariant::jordan : ExtensionVariant::delta;
  if (p.variant == "delta") return ExtensionVariant::delta;
  if (p.variant == "jordan") return ExtensionVariant::jordan;
  throw DomainError("unknown extension variant '" + p.variant + "'");
}

}  // namespace

PreDModule build_pre(const std::string& name, const BuilderParams& params) {
  params.ctx.check();
  if (name == "delta") return delta_object(params.ctx);
  if (name == "codelta") return atom_product(params.ctx, std::vector<Atom>(params.ctx.divisor_multiplicity, Atom{Atom::Type::codelta, 0.0}));
  if (name == "constant") return constant_object(params.ctx, params.alpha);
  if (name == "extension") {
    const auto variant = extension_variant(params);
    const Complex alpha = params.alpha_given || variant == ExtensionVariant::jordan ? params.alpha : Complex{0.0};
    return extension_object(params.ctx, alpha, variant).object;
  }
  if (name == "local-system") {
    std::mt19937_64 rng(params.seed);
    const FundamentalDomain domain{params.sigma};
    ArrowStyle style = ArrowStyle::t_is_theta;
    if (params.variant == "s=theta") style = ArrowStyle::s_is_theta;
    else if (!params.variant.empty() && params.variant != "t=theta") throw DomainError("local-system variant must be t=theta or s=theta");
    return from_local_system(params.ctx, random_commuting_monodromies(params.ctx.divisor_multiplicity, params.n, rng, domain),
                             domain, style);
  }
  if (name == "direct-sum") {
    if (params.parts.empty()) throw DomainError("direct-sum needs at least one part");
    PreDModule out;
    for (std::size_t i = 0; i < params.parts.size(); ++i) {
      auto [part_name, p] = split_part(params.parts[i], params);
      p.parts.clear();
      if (part_name == "direct-sum") throw DomainError("nested direct-sum parts are not supported");
      if (p.seed == params.seed) p.seed = params.seed + i;
      PreDModule e = build_pre(part_name, p);
      out = i == 0 ? e : direct_sum(out, e);
    }
    return out;
  }
  if (name == "product") {
    std::vector<Atom> atoms;
    if (params.parts.size() != static_cast<std::size_t>(params.ctx.divisor_multiplicity)) {
      throw DomainError("product needs one atom part per direction (got " + std::to_string(params.parts.size()) +
                        ", r = " + std::to_string(params.ctx.divisor_multiplicity) + ")");
    }
    for (const auto& part : params.parts) atoms.push_back(parse_atom(part, params));
    return atom_product(params.ctx, atoms);
  }
  throw DomainError("unknown builder '" + name + "'");
}

VerdierObject build_verdier(const std::string& name, const BuilderParams& params) {
  params.ctx.check();
  if (name == "constant") {
    // Nearby/vanishing pair: Mono = lambda, C = lambda - 1, V = 1, with lambda = alpha.
    const Complex lambda = params.alpha_given ? params.alpha : Complex{-1.0};
    return verdier_from_local_system(params.ctx, std::vector<CMatrix>(params.ctx.divisor_multiplicity, CMatrix::scalar(lambda)));
  }
  if (name == "local-system") {
    std::mt19937_64 rng(params.seed);
    return verdier_from_local_system(params.ctx,
                                     random_commuting_monodromies(params.ctx.divisor_multiplicity, params.n, rng));
  }
  if (name == "direct-sum") {
    if (params.parts.empty()) throw DomainError("direct-sum needs at least one part");
    VerdierObject out;
    for (std::size_t i = 0; i < params.parts.size(); ++i) {
      auto [part_name, p] = split_part(params.parts[i], params);
      p.parts.clear();
      if (part_name == "direct-sum") throw DomainError("nested direct-sum parts are not supported");
      if (p.seed == params.seed) p.seed = params.seed + i;
      VerdierObject v = build_verdier(part_name, p);
      out = i == 0 ? v : direct_sum(out, v);
    }
    return out;
  }
  // Everything else goes through the functor.
  return rh(build_pre(name, params));
}

}  // namespace polydisk
