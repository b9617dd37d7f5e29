#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "polydisk/builders.hpp"
#include "polydisk/cli.hpp"
#include "polydisk/io.hpp"

using namespace polydisk;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("polydisk-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write_json(const std::string& name, const Json& j) const { return write(name, j.dump()); }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

Json esnault_doc() {
  PreDModule e = PreDModule::zeros({2, 2}, {2, 2, 2, 2});
  const CMatrix t1{{1.0, 0.0}, {0.0, 0.0}}, t2{{0.0, 0.0}, {0.0, 1.0}};
  for (Mask a = 0; a < 4; ++a) {
    e.theta(a, 1) = t1;
    e.theta(a, 2) = t2;
    if (a & 1u) e.t(a, 1) = t1, e.s(a, 1) = CMatrix::identity(2);
    if (a & 2u) e.t(a, 2) = t2, e.s(a, 2) = CMatrix::identity(2);
  }
  return serialize(e);
}

Json broken_doc() {
  PreDModule c = constant_object({1, 1}, 0.3);
  c.s(1, 1) = CMatrix::scalar(2.0);
  return serialize(c);
}

}  // namespace

TEST_CASE("cli: strata and gen") {
  const Run strata = run({"strata", "--d", "3", "--r", "2"});
  REQUIRE(strata.code == kExitOk);
  CHECK(strata.json()["strata"].size() == 4);

  const Run delta = run({"gen", "delta", "--r", "1"});
  REQUIRE(delta.code == kExitOk);
  const Json dj = delta.json();
  CHECK(dj["nodes"]["[]"]["dim"] == 0);
  CHECK(dj["nodes"]["[1]"]["dim"] == 1);
  CHECK(dj["metadata"]["name"] == "delta");

  TempDir dir;
  const Run local = run({"--seed", "7", "gen", "local-system", "--r", "2", "--n", "3"});
  REQUIRE(local.code == kExitOk);
  CHECK(local.json()["metadata"]["seed"] == 7);
  const std::string lf = dir.write("local.json", local.out);
  CHECK(run({"validate", lf}).json()["valid"] == true);
  CHECK(run({"good-eig", lf}).json()["good"] == true);
  // Deterministic given the seed.
  CHECK(run({"--seed", "7", "gen", "local-system", "--r", "2", "--n", "3"}).out == local.out);
  CHECK(run({"--seed", "8", "gen", "local-system", "--r", "2", "--n", "3"}).out != local.out);

  const Run sum = run({"gen", "direct-sum", "--r", "1", "--part", "delta", "--part", "constant:alpha=0.3"});
  REQUIRE(sum.code == kExitOk);
  CHECK(sum.json()["nodes"]["[]"]["dim"] == 1);
  CHECK(sum.json()["nodes"]["[1]"]["dim"] == 2);

  for (const char* builder : {"delta", "codelta", "constant", "local-system", "extension", "direct-sum", "product"}) {
    for (const char* r : {"1", "2", "3"}) {
      std::vector<std::string> args{"gen", builder, "--r", r};
      if (std::string(builder) == "direct-sum") args.insert(args.end(), {"--part", "delta", "--part", "constant"});
      if (std::string(builder) == "extension") args.insert(args.end(), {"--variant", "jordan"});
      if (std::string(builder) == "product") {
        const char* atoms[] = {"constant:alpha=0.4", "delta", "codelta"};
        for (int k = 0; k < std::stoi(r); ++k) args.insert(args.end(), {"--part", atoms[k]});
      }
      const Run g = run(args);
      REQUIRE_MESSAGE(g.code == kExitOk, builder, " ", g.err);
      const std::string f = dir.write("g.json", g.out);
      CHECK_MESSAGE(run({"validate", f}).code == kExitOk, builder);
      args.insert(args.end(), {"--kind", "verdier"});
      const Run gv = run(args);
      REQUIRE_MESSAGE(gv.code == kExitOk, builder, " ", gv.err);
      CHECK(run({"validate", dir.write("gv.json", gv.out)}).code == kExitOk);
    }
  }
  CHECK(run({"gen", "extension", "--variant", "delta", "--alpha", "0.3"}).code == kExitMalformed);
  CHECK(run({"gen", "no-such-builder"}).code == kExitMalformed);
  CHECK(run({"gen", "product", "--r", "2", "--part", "delta"}).code == kExitMalformed);
}

TEST_CASE("cli: validate and good-eig exit codes") {
  TempDir dir;
  const std::string es = dir.write_json("esnault.json", esnault_doc());
  const Run v = run({"validate", es});
  CHECK(v.code == kExitOk);
  CHECK(v.json()["valid"] == true);

  const Run g = run({"good-eig", es});
  CHECK(g.code == kExitOk);
  const Json gj = g.json();
  CHECK(gj["good"] == false);
  CHECK(gj["witness"]["level"] == 1);
  CHECK(gj["witness"]["first"]["eigenvalue"] == Json::parse("[1.0, 0.0]"));
  CHECK(gj["witness"]["second"]["eigenvalue"] == Json::parse("[0.0, 0.0]"));

  const std::string broken = dir.write_json("broken.json", broken_doc());
  const Run b = run({"validate", broken});
  CHECK(b.code == kExitInvalid);
  CHECK(b.json()["valid"] == false);
  CHECK(b.json()["violations"][0].contains("axiom"));
  CHECK(run({"rh", broken}).code == kExitInvalid);
  CHECK(run({"good-eig", broken}).code == kExitInvalid);

  // Several files: an array in input order, invalid anywhere gives exit 1.
  const Run many = run({"validate", "--jobs", "3", es, broken, es, broken, es});
  CHECK(many.code == kExitInvalid);
  const Json mj = many.json();
  REQUIRE(mj.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(mj[i]["valid"] == (i % 2 == 0));
  CHECK(mj[1]["file"] == broken);

  CHECK(run({"validate", dir.write("bad.json", "{\"kind\": ")}).code == kExitMalformed);
  CHECK(run({"validate", dir.path("missing.json")}).code == kExitMalformed);
  CHECK(run({"good-eig", dir.write("bad2.json", "{\"kind\": \"nope\"}")}).code == kExitMalformed);
  CHECK(run({"--no-such-flag", "validate", es}).code == kExitMalformed);
  CHECK(run({}).code == kExitMalformed);
}

TEST_CASE("cli: tolerance from the environment, flag takes precedence") {
  TempDir dir;
  const std::string broken = dir.write_json("broken.json", broken_doc());
  ::setenv("POLYDISK_TOL", "0.5", 1);
  CHECK(run({"validate", broken}).code == kExitOk);
  CHECK(run({"--tol", "1e-8", "validate", broken}).code == kExitInvalid);
  ::setenv("POLYDISK_TOL", "abc", 1);
  CHECK(run({"validate", broken}).code == kExitMalformed);
  ::unsetenv("POLYDISK_TOL");
  CHECK(run({"validate", broken}).code == kExitInvalid);
}

TEST_CASE("cli: rh pipeline and S-equivalence") {
  TempDir dir;
  const Run gen = run({"--seed", "3", "gen", "local-system", "--r", "2", "--n", "2"});
  REQUIRE(gen.code == kExitOk);
  const std::string e = dir.write("e.json", gen.out);
  const std::string v = dir.path("v.json");
  const std::string back = dir.path("back.json");
  REQUIRE(run({"rh", e, "-o", v}).code == kExitOk);
  REQUIRE(run({"--sigma", "0", "inv-rh", v, "-o", back}).code == kExitOk);
  const Run s = run({"sequiv", e, back});
  CHECK(s.code == kExitOk);
  CHECK(s.json()["s_equivalent"] == true);
  CHECK(s.json()["isomorphic"] == "yes");
  CHECK(run({"--sigma", "0.5", "inv-rh", v}).code == kExitMalformed);
  CHECK(run({"sequiv", e, v}).code == kExitMalformed);

  const Run rh_out = run({"rh", e});
  CHECK(rh_out.json()["kind"] == "verdier-object");
}

TEST_CASE("cli: jh, stable, degenerate, jacobian") {
  TempDir dir;
  const auto ext = extension_object({1, 1}, 0.3, ExtensionVariant::jordan);
  const std::string ef = dir.write_json("ext.json", serialize(ext.object));
  const std::string ff = dir.write_json("filt.json", serialize(ext.filtration, ext.object.cube));

  const Run jh = run({"jh", ef});
  CHECK(jh.code == kExitOk);
  CHECK(jh.json()["length"] == 2);
  CHECK(jh.json()["factors"][0]["multiplicity"] == 2);
  // Byte-identical output for identical inputs and seed.
  CHECK(run({"jh", ef}).out == jh.out);
  CHECK(run({"--seed", "5", "jh", ef}).code == kExitOk);

  const Run st = run({"stable", ef});
  CHECK(st.code == kExitOk);
  CHECK(st.json()["stable"] == false);
  CHECK(run({"stable", dir.write_json("c.json", serialize(constant_object({1, 1}, 0.3)))}).json()["stable"] == true);
  // Without random rounds and beyond the small-object fallback the test cannot decide.
  const std::string big = dir.write_json("big.json", serialize(constant_object({3, 3}, 0.3)));
  const Run undecided = run({"--rounds", "0", "stable", big});
  CHECK(undecided.code == kExitInconclusive);
  CHECK(undecided.json()["status"] == "inconclusive");

  const Run d0 = run({"degenerate", ef, "--filtration", ff, "--tau", "0"});
  REQUIRE(d0.code == kExitOk);
  const std::string gf = dir.write("graded.json", d0.out);
  CHECK(run({"validate", gf}).code == kExitOk);
  CHECK(run({"sequiv", ef, gf}).json()["s_equivalent"] == true);
  CHECK(run({"sequiv", ef, gf}).json()["isomorphic"] != "yes");
  CHECK(run({"degenerate", ef, "--filtration", ff, "--tau", "0.5,0.1"}).code == kExitOk);
  Json bad_filt = serialize(ext.filtration, ext.object.cube);
  bad_filt["subspaces"][1]["[]"] = Json::parse("[[0.0], [1.0]]");
  bad_filt["subspaces"][1]["[1]"] = Json::parse("[[0.0], [1.0]]");
  CHECK(run({"degenerate", ef, "--filtration", dir.write_json("bf.json", bad_filt)}).code == kExitInvalid);

  const Run deficient = run({"jacobian", dir.write("st.json", std::string("{\"s\": [[1], [0]], \"t\": [[1, 0]]}"))});
  CHECK(deficient.code == kExitOk);
  CHECK(deficient.json()["full"] == false);
  const Run full = run({"jacobian", dir.write("st2.json", std::string("{\"s\": [[1]], \"t\": [[0.3]]}"))});
  CHECK(full.json()["full"] == true);
  CHECK(full.json()["rank"] == 4);
  const Run per_arrow = run({"jacobian", ef});
  CHECK(per_arrow.code == kExitOk);
  CHECK(per_arrow.json()["pairs"].size() == 1);
}
