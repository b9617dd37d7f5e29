#include "polydisk/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

#include "polydisk/algebra.hpp"
#include "polydisk/builders.hpp"
#include "polydisk/errors.hpp"
#include "polydisk/functor_rh.hpp"
#include "polydisk/io.hpp"

namespace polydisk {

namespace {

struct GlobalOptions {
  double tol = 1e-8;
  double rank_tol = 1e-6;
  std::uint64_t seed = 1;
  double sigma = 0.0;
  int rounds = 30;
  unsigned jobs = 0;
};

AlgebraOptions algebra_options(const GlobalOptions& g) {
  AlgebraOptions o;
  o.seed = g.seed;
  o.tol = g.tol;
  o.rank_tol = g.rank_tol;
  o.rounds = g.rounds;
  return o;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

Json violation_json(const Violation& v) {
  Json j;
  j["axiom"] = v.axiom;
  j["stratum"] = StratumIndex{v.stratum}.label();
  if (v.k) j["k"] = v.k;
  if (v.l) j["l"] = v.l;
  j["residual"] = v.residual;
  return j;
}

Json dims_json(const Hypercube& c) {
  Json j = Json::object();
  for (Mask a = 0; a < c.node_count(); ++a) j[StratumIndex{a}.label()] = c.dims[a];
  return j;
}

ValidationReport validate_doc(const ObjectDocument& doc, double tol) {
  return validate_cube(doc.cube, doc.kind, tol);
}

void require_valid_doc(const ObjectDocument& doc, double tol) {
  const auto report = validate_doc(doc, tol);
  if (!report.ok()) {
    throw InvalidObjectError(std::string("input is not a valid ") + kind_name(doc.kind) + ": " +
                             describe(report.violations.front()));
  }
}

struct FileResult {
  Json report;
  int code = kExitOk;
};

FileResult validate_file(const std::string& path, double tol) {
  FileResult r;
  r.report["file"] = path;
  try {
    const ObjectDocument doc = read_document(path);
    const auto report = validate_doc(doc, tol);
    r.report["kind"] = kind_name(doc.kind);
    r.report["valid"] = report.ok();
    Json v = Json::array();
    for (const auto& x : report.violations) v.push_back(violation_json(x));
    r.report["violations"] = std::move(v);
    r.code = report.ok() ? kExitOk : kExitInvalid;
  } catch (const Error& e) {
    r.report["error"] = e.what();
    r.code = kExitMalformed;
  }
  return r;
}

int cmd_validate(const std::vector<std::string>& files, const GlobalOptions& g, std::ostream& out) {
  const unsigned workers = std::max(1u, g.jobs ? g.jobs : std::thread::hardware_concurrency());
  std::vector<FileResult> results(files.size());
  for (std::size_t start = 0; start < files.size(); start += workers) {
    std::vector<std::future<FileResult>> batch;
    const std::size_t end = std::min(files.size(), start + workers);
    for (std::size_t i = start; i < end; ++i) batch.push_back(std::async(std::launch::async, validate_file, files[i], g.tol));
    for (std::size_t i = start; i < end; ++i) results[i] = batch[i - start].get();
  }
  int code = kExitOk;
  for (const auto& r : results) {
    if (r.code == kExitMalformed) code = kExitMalformed;
    else if (r.code == kExitInvalid && code == kExitOk) code = kExitInvalid;
  }
  if (results.size() == 1) {
    emit(out, results.front().report);
  } else {
    Json arr = Json::array();
    for (auto& r : results) arr.push_back(std::move(r.report));
    emit(out, arr);
  }
  return code;
}

int cmd_good_eig(const std::string& path, const GlobalOptions& g, std::ostream& out) {
  const PreDModule e = as_pre(read_document(path));
  const auto res = good_residual_eigenvalues(e, g.tol, g.tol);
  Json j;
  j["good"] = res.good;
  if (!res.good) {
    const auto& w = res.witness;
    auto side = [](Mask a, int k, Complex z) {
      return Json{{"stratum", StratumIndex{a}.label()}, {"k", k}, {"eigenvalue", complex_to_json(z)}};
    };
    j["witness"] = {{"level", w.level},
                    {"first", side(w.first_stratum, w.first_k, w.first_value)},
                    {"second", side(w.second_stratum, w.second_k, w.second_value)},
                    {"difference", complex_to_json(w.first_value - w.second_value)}};
  }
  emit(out, j);
  return kExitOk;
}

void write_or_emit(const Json& j, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    emit(out, j);
    return;
  }
  std::ofstream f(output);
  if (!f) throw ShapeError("cannot write " + output);
  f << j.dump(2) << "\n";
}

int cmd_rh(const std::string& path, const std::string& output, const GlobalOptions& g, std::ostream& out) {
  const auto doc = read_document(path);
  write_or_emit(serialize(rh(as_pre(doc), g.tol), doc.metadata), output, out);
  return kExitOk;
}

int cmd_inv_rh(const std::string& path, const std::string& output, const GlobalOptions& g, std::ostream& out) {
  const auto doc = read_document(path);
  write_or_emit(serialize(inverse_rh(as_verdier(doc), FundamentalDomain{g.sigma}, g.tol), doc.metadata), output, out);
  return kExitOk;
}

Json jh_json(const JordanHolderReport& rep, const ObjectDocument& doc) {
  Json j;
  j["status"] = rep.decided ? "decided" : "inconclusive";
  j["detail"] = rep.detail;
  j["dims"] = dims_json(doc.cube);
  if (rep.decided) {
    j["length"] = rep.composition_factors.size();
    Json factors = Json::array();
    for (const auto& f : rep.factors) {
      factors.push_back({{"object", serialize(ObjectDocument{doc.kind, f.object, nullptr})},
                         {"multiplicity", f.multiplicity},
                         {"dims", dims_json(f.object)}});
    }
    j["factors"] = std::move(factors);
  }
  return j;
}

int cmd_jh(const std::string& path, const GlobalOptions& g, std::ostream& out) {
  const auto doc = read_document(path);
  require_valid_doc(doc, g.tol);
  const auto rep = jordan_holder(to_presentation(doc.cube, doc.kind), algebra_options(g));
  emit(out, jh_json(rep, doc));
  return rep.decided ? kExitOk : kExitInconclusive;
}

int cmd_sequiv(const std::string& a_path, const std::string& b_path, const GlobalOptions& g, std::ostream& out) {
  const auto a = read_document(a_path);
  const auto b = read_document(b_path);
  if (a.kind != b.kind) throw ShapeError("sequiv: documents are of different kinds");
  if (!(a.cube.ctx == b.cube.ctx)) throw ShapeError("sequiv: documents have different contexts");
  require_valid_doc(a, g.tol);
  require_valid_doc(b, g.tol);
  const auto opt = algebra_options(g);
  const auto pa = to_presentation(a.cube, a.kind);
  const auto pb = to_presentation(b.cube, b.kind);
  const auto ja = jordan_holder(pa, opt);
  const auto jb = jordan_holder(pb, opt);
  const auto se = s_equivalent(ja, jb, opt);
  const auto iso = isomorphic(pa, pb, opt);
  Json j;
  j["status"] = se.decided ? "decided" : "inconclusive";
  if (se.decided) j["s_equivalent"] = se.equivalent;
  j["detail"] = se.detail;
  j["isomorphic"] = to_string(iso.status);
  if (!iso.invariant.empty()) j["separating_invariant"] = iso.invariant;
  emit(out, j);
  return se.decided ? kExitOk : kExitInconclusive;
}

int cmd_stable(const std::string& path, const GlobalOptions& g, std::ostream& out) {
  const auto doc = read_document(path);
  require_valid_doc(doc, g.tol);
  const auto res = doc.kind == ObjectKind::pre_d_module ? is_stable(as_pre(doc), algebra_options(g))
                                                        : is_stable(as_verdier(doc), algebra_options(g));
  Json j;
  j["status"] = to_string(res.status);
  if (res.status != SimplicityStatus::inconclusive) j["stable"] = res.stable;
  j["detail"] = res.detail;
  j["note"] = "stability coincides with simplicity for fiber data";
  emit(out, j);
  return res.status == SimplicityStatus::inconclusive ? kExitInconclusive : kExitOk;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ShapeError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ShapeError(path + ": invalid JSON: " + e.what());
  }
}

int cmd_degenerate(const std::string& path, const std::string& filt_path, const std::string& tau_text,
                   const GlobalOptions& g, std::ostream& out) {
  const auto doc = read_document(path);
  require_valid_doc(doc, g.tol);
  Filtration f;
  try {
    f = parse_filtration(read_json_file(filt_path), doc.cube);
  } catch (const ShapeError& e) {
    throw ShapeError(filt_path + ": " + e.what());
  }
  const Complex tau = parse_complex(tau_text);
  emit(out, serialize(ObjectDocument{doc.kind, degenerate(doc.cube, f, tau, doc.kind, g.tol), doc.metadata}));
  return kExitOk;
}

Json jacobian_json(const JacobianRank& jr) {
  return {{"rank", jr.rank}, {"expected", jr.full_rank_expected}, {"full", jr.full()},
          {"singular_values", jr.singular_values}};
}

int cmd_jacobian(const std::string& path, double step, double jac_tol, const GlobalOptions& g, std::ostream& out) {
  const Json j = read_json_file(path);
  Json result;
  if (j.is_object() && !j.contains("kind")) {
    if (!j.contains("s") || !j.contains("t")) throw ShapeError(path + ": expected {\"s\": M, \"t\": M} or an object document");
    const CMatrix s = matrix_from_json(j["s"], "$[\"s\"]");
    const CMatrix t = matrix_from_json(j["t"], "$[\"t\"]");
    result = jacobian_json(rh_jacobian_rank(s, t, step, jac_tol));
    emit(out, result);
    return kExitOk;
  }
  ObjectDocument doc;
  try {
    doc = parse_document(j);
  } catch (const ShapeError& e) {
    throw ShapeError(path + ": " + e.what());
  }
  const PreDModule e = as_pre(doc);
  require_valid(e, g.tol);
  Json pairs = Json::array();
  bool all_full = true;
  for (Mask a = 0; a < e.cube.node_count(); ++a) {
    for (int k = 1; k <= e.r(); ++k) {
      if (!StratumIndex{a}.contains(k)) continue;
      const auto jr = rh_jacobian_rank(e.s(a, k), e.t(a, k), step, jac_tol);
      all_full = all_full && jr.full();
      Json p = jacobian_json(jr);
      p["arrow"] = StratumIndex{a}.label() + "|" + std::to_string(k);
      pairs.push_back(std::move(p));
    }
  }
  result["pairs"] = std::move(pairs);
  result["all_full"] = all_full;
  emit(out, result);
  return kExitOk;
}

struct GenOptions {
  std::string builder;
  std::string kind = "pre";
  int r = 1;
  int d = -1;
  std::size_t n = 2;
  std::string alpha;
  std::string variant;
  std::vector<std::string> parts;
};

int cmd_gen(const GenOptions& o, const GlobalOptions& g, std::ostream& out) {
  BuilderParams p;
  p.ctx = {o.d < 0 ? o.r : o.d, o.r};
  p.n = o.n;
  if (!o.alpha.empty()) {
    p.alpha = parse_complex(o.alpha);
    p.alpha_given = true;
  }
  p.variant = o.variant;
  p.sigma = g.sigma;
  p.seed = g.seed;
  p.parts = o.parts;
  Json meta = {{"name", o.builder}, {"seed", g.seed}, {"provenance", "polydisk gen"}};
  if (o.kind == "pre") {
    emit(out, serialize(build_pre(o.builder, p), meta));
  } else if (o.kind == "verdier") {
    emit(out, serialize(build_verdier(o.builder, p), meta));
  } else {
    throw DomainError("--kind must be pre or verdier");
  }
  return kExitOk;
}

int cmd_strata(int d, int r, std::ostream& out) {
  const PolydiskContext ctx{d, r};
  ctx.check();
  auto elems = [](const StratumIndex& s) { return Json(s.elements()); };
  Json j;
  j["context"] = {{"d", d}, {"r", r}};
  Json strata = Json::array();
  for (const auto& s : enumerate_strata(ctx)) strata.push_back(elems(s));
  j["strata"] = std::move(strata);
  Json ys = Json::object(), z = Json::object(), zs = Json::object();
  for (int c = 1; c <= r; ++c) {
    Json list = Json::array();
    for (const auto& [a, k] : cover_Y_star(ctx, c)) list.push_back({{"A", elems(a)}, {"k", k}});
    ys[std::to_string(c)] = std::move(list);
  }
  for (int c = 2; c <= r; ++c) {
    Json list = Json::array();
    for (const auto& [a, pr] : cover_Z(ctx, c)) list.push_back({{"A", elems(a)}, {"pair", {pr.first, pr.second}}});
    z[std::to_string(c)] = std::move(list);
    Json slist = Json::array();
    for (const auto& sh : cover_Z_star(ctx, c)) {
      const Json ordered = sh.swapped ? Json{sh.pair.second, sh.pair.first} : Json{sh.pair.first, sh.pair.second};
      slist.push_back({{"A", elems(sh.stratum)}, {"pair", ordered}});
    }
    zs[std::to_string(c)] = std::move(slist);
  }
  j["cover_Y_star"] = std::move(ys);
  j["cover_Z"] = std::move(z);
  j["cover_Z_star"] = std::move(zs);
  emit(out, j);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  GlobalOptions g;
  if (const char* env = std::getenv("POLYDISK_TOL")) {
    try {
      std::size_t pos = 0;
      g.tol = std::stod(env, &pos);
      if (pos != std::string(env).size() || !(g.tol > 0.0)) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      err << "error: POLYDISK_TOL must be a positive number, got '" << env << "'\n";
      return kExitMalformed;
    }
  }

  CLI::App app{"Hypercube models of regular holonomic D-modules and perverse sheaves on a polydisk", "polydisk"};
  app.require_subcommand(1);
  app.add_option("--tol", g.tol, "structural residual tolerance (default 1e-8, or $POLYDISK_TOL)")
      ->check(CLI::PositiveNumber);
  app.add_option("--rank-tol", g.rank_tol, "relative tolerance for rank and kernel decisions")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for randomized procedures and generators");
  app.add_option("--sigma", g.sigma, "fundamental domain: Re in [sigma, sigma + 1)");
  app.add_option("--rounds", g.rounds, "random algebra elements tried by the simplicity test")->check(CLI::NonNegativeNumber);

  std::vector<std::string> files;
  auto* validate = app.add_subcommand("validate", "check the axioms of one or more object documents");
  validate->add_option("files", files, "object documents")->required();
  validate->add_option("--jobs", g.jobs, "parallel workers (default: hardware threads)");

  std::string file, file_b, output;
  auto* good = app.add_subcommand("good-eig", "good residual eigenvalue test");
  good->add_option("file", file)->required();

  auto* rh_cmd = app.add_subcommand("rh", "Riemann-Hilbert functor: pre-d-module -> verdier-object");
  rh_cmd->add_option("file", file)->required();
  rh_cmd->add_option("-o,--output", output, "write the result here instead of stdout");

  auto* inv = app.add_subcommand("inv-rh", "Deligne construction: verdier-object -> pre-d-module");
  inv->add_option("file", file)->required();
  inv->add_option("-o,--output", output, "write the result here instead of stdout");

  auto* jh = app.add_subcommand("jh", "Jordan-Holder factors");
  jh->add_option("file", file)->required();

  auto* sequiv = app.add_subcommand("sequiv", "S-equivalence (same Jordan-Holder factors) of two objects");
  sequiv->add_option("first", file)->required();
  sequiv->add_option("second", file_b)->required();

  auto* stable = app.add_subcommand("stable", "stability (= simplicity for fiber data)");
  stable->add_option("file", file)->required();

  std::string filt_path, tau_text = "0";
  auto* degen = app.add_subcommand("degenerate", "tau-slice of the degeneration along a filtration");
  degen->add_option("file", file)->required();
  degen->add_option("--filtration", filt_path, "filtration document")->required();
  degen->add_option("--tau", tau_text, "complex parameter, e.g. 0.5 or 0.5,0.1");

  double step = 1e-5, jac_tol = 1e-5;
  auto* jac = app.add_subcommand("jacobian", "rank of the linearized RH map at each arrow pair");
  jac->add_option("file", file, "pre-d-module document or {\"s\": M, \"t\": M}")->required();
  jac->add_option("--step", step, "finite-difference step")->check(CLI::PositiveNumber);
  jac->add_option("--jac-tol", jac_tol, "relative singular value cutoff")->check(CLI::PositiveNumber);

  GenOptions gen_opt;
  auto* gen = app.add_subcommand("gen", "generate an object document");
  gen->add_option("builder", gen_opt.builder, "delta | codelta | constant | local-system | extension | direct-sum | product")
      ->required();
  gen->add_option("--kind", gen_opt.kind, "pre | verdier");
  gen->add_option("--r", gen_opt.r, "divisor multiplicity")->check(CLI::Range(0, kMaxMultiplicity));
  gen->add_option("--d", gen_opt.d, "ambient dimension (default r)");
  gen->add_option("--n", gen_opt.n, "rank of local systems");
  gen->add_option("--alpha", gen_opt.alpha, "residue (pre) or monodromy eigenvalue (verdier constant)");
  gen->add_option("--variant", gen_opt.variant, "extension: delta | jordan; local-system: t=theta | s=theta");
  gen->add_option("--part", gen_opt.parts, "component \"name[:key=value;...]\" for direct-sum / product");

  int sd = 2, sr = 2;
  auto* strata = app.add_subcommand("strata", "enumerate strata and covers");
  strata->add_option("--d", sd, "ambient dimension");
  strata->add_option("--r", sr, "divisor multiplicity");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  }

  try {
    if (*validate) return cmd_validate(files, g, out);
    if (*good) return cmd_good_eig(file, g, out);
    if (*rh_cmd) return cmd_rh(file, output, g, out);
    if (*inv) return cmd_inv_rh(file, output, g, out);
    if (*jh) return cmd_jh(file, g, out);
    if (*sequiv) return cmd_sequiv(file, file_b, g, out);
    if (*stable) return cmd_stable(file, g, out);
    if (*degen) return cmd_degenerate(file, filt_path, tau_text, g, out);
    if (*jac) return cmd_jacobian(file, step, jac_tol, g, out);
    if (*gen) return cmd_gen(gen_opt, g, out);
    if (*strata) return cmd_strata(sd, sr, out);
  } catch (const InvalidObjectError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NotInvariantError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InconclusiveError& e) {
    err << "inconclusive: " << e.what() << "\n";
    return kExitInconclusive;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitMalformed;
}

}  // namespace polydisk
