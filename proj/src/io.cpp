#include "polydisk/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "polydisk/errors.hpp"

namespace polydisk {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ShapeError(path + ": " + msg); }

std::string key_path(const std::string& path, const std::string& key) { return path + "[\"" + key + "\"]"; }
std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const char* loop_key(ObjectKind k) { return k == ObjectKind::pre_d_module ? "theta" : "mono"; }
const char* up_key(ObjectKind k) { return k == ObjectKind::pre_d_module ? "t" : "C"; }
const char* down_key(ObjectKind k) { return k == ObjectKind::pre_d_module ? "s" : "V"; }

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "non-finite number");
    return {v, 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(path, "expected a complex number [re, im]");
  }
  const double re = j[0].get<double>();
  const double im = j[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) fail(path, "non-finite number");
  return {re, im};
}

int int_field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) fail(path, std::string("missing \"") + key + "\"");
  const Json& v = obj.at(key);
  if (!v.is_number_integer()) fail(key_path(path, key), "expected an integer");
  return v.get<int>();
}

struct ArrowKey {
  Mask stratum;
  int k;
};

ArrowKey parse_arrow_key(const std::string& key, int r, const std::string& path) {
  const auto bar = key.find('|');
  if (bar == std::string::npos) fail(path, "arrow key must look like \"[1,2]|1\"");
  StratumIndex a;
  try {
    a = StratumIndex::parse_label(key.substr(0, bar), r);
  } catch (const ShapeError& e) {
    fail(path, e.what());
  }
  int k = 0;
  try {
    std::size_t pos = 0;
    k = std::stoi(key.substr(bar + 1), &pos);
    if (pos != key.size() - bar - 1) throw std::invalid_argument("");
  } catch (const std::logic_error&) {
    fail(path, "bad direction in arrow key");
  }
  if (k < 1 || k > r) fail(path, "k not in A (direction " + std::to_string(k) + " is out of range 1.." + std::to_string(r) + ")");
  if (!a.contains(k)) fail(path, "k not in A (" + std::to_string(k) + " is not in " + a.label() + ")");
  return {a.mask, k};
}

}  // namespace

const char* kind_name(ObjectKind kind) { return kind == ObjectKind::pre_d_module ? "pre-d-module" : "verdier-object"; }

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a matrix (list of rows)");
  if (j.size() != rows && !(rows == 0 && j.empty())) {
    fail(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  }
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = j[i];
    const std::string rp = index_path(path, i);
    if (!row.is_array()) fail(rp, "expected a row (list of entries)");
    if (row.size() != cols) fail(rp, "expected " + std::to_string(cols) + " columns, got " + std::to_string(row.size()));
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(row[c], index_path(rp, c));
  }
  return m;
}

CMatrix matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a matrix (list of rows)");
  if (j.empty()) return CMatrix(0, 0);
  if (!j[0].is_array()) fail(index_path(path, 0), "expected a row (list of entries)");
  return matrix_from_json(j, j.size(), j[0].size(), path);
}

ObjectDocument parse_document(const Json& doc) {
  const std::string root = "$";
  if (!doc.is_object()) fail(root, "expected a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "kind" && key != "context" && key != "nodes" && key != "metadata" && key != "t" && key != "s" &&
        key != "C" && key != "V") {
      fail(key_path(root, key), "unknown key");
    }
  }
  ObjectDocument out;
  if (!doc.contains("kind") || !doc["kind"].is_string()) fail(root, "missing or non-string \"kind\"");
  const std::string kind = doc["kind"].get<std::string>();
  if (kind == "pre-d-module") {
    out.kind = ObjectKind::pre_d_module;
  } else if (kind == "verdier-object") {
    out.kind = ObjectKind::verdier;
  } else {
    fail(key_path(root, "kind"), "unknown kind \"" + kind + "\"");
  }
  const char* other_up = out.kind == ObjectKind::pre_d_module ? "C" : "t";
  const char* other_down = out.kind == ObjectKind::pre_d_module ? "V" : "s";
  if (doc.contains(other_up) || doc.contains(other_down)) {
    fail(root, std::string("keys \"") + other_up + "\"/\"" + other_down + "\" do not belong to a " + kind);
  }

  if (!doc.contains("context") || !doc["context"].is_object()) fail(root, "missing \"context\" object");
  const std::string cpath = key_path(root, "context");
  PolydiskContext ctx{int_field(doc["context"], "d", cpath), int_field(doc["context"], "r", cpath)};
  try {
    ctx.check();
  } catch (const Error& e) {
    fail(cpath, e.what());
  }
  const int r = ctx.divisor_multiplicity;

  if (!doc.contains("nodes") || !doc["nodes"].is_object()) fail(root, "missing \"nodes\" object");
  const Json& nodes = doc["nodes"];
  const std::string npath = key_path(root, "nodes");
  std::vector<std::size_t> dims(ctx.node_count(), 0);
  std::vector<bool> seen(ctx.node_count(), false);
  std::vector<const Json*> node_json(ctx.node_count(), nullptr);
  for (const auto& [label, node] : nodes.items()) {
    const std::string p = key_path(npath, label);
    StratumIndex a;
    try {
      a = StratumIndex::parse_label(label, r);
    } catch (const ShapeError& e) {
      fail(p, e.what());
    }
    if (a.label() != label) fail(p, "non-canonical stratum label (expected " + a.label() + ")");
    if (!node.is_object()) fail(p, "expected a node object");
    const int dim = int_field(node, "dim", p);
    if (dim < 0) fail(key_path(p, "dim"), "dimension must be nonnegative");
    for (const auto& [key, _] : node.items()) {
      if (key != "dim" && key != loop_key(out.kind)) fail(key_path(p, key), "unknown key");
    }
    dims[a.mask] = static_cast<std::size_t>(dim);
    seen[a.mask] = true;
    node_json[a.mask] = &node;
  }
  for (Mask a = 0; a < ctx.node_count(); ++a) {
    if (!seen[a]) fail(npath, "missing node " + StratumIndex{a}.label());
  }

  out.cube = Hypercube::zeros(ctx, dims);
  for (Mask a = 0; a < ctx.node_count(); ++a) {
    const std::string p = key_path(npath, StratumIndex{a}.label());
    const Json& node = *node_json[a];
    if (!node.contains(loop_key(out.kind))) {
      if (dims[a] == 0 || r == 0) continue;
      fail(p, std::string("missing \"") + loop_key(out.kind) + "\"");
    }
    const Json& loops = node[loop_key(out.kind)];
    const std::string lp = key_path(p, loop_key(out.kind));
    if (!loops.is_object()) fail(lp, "expected an object keyed by direction \"1\"..\"r\"");
    for (const auto& [key, _] : loops.items()) {
      bool ok = false;
      for (int k = 1; k <= r; ++k) ok = ok || key == std::to_string(k);
      if (!ok) fail(key_path(lp, key), "direction out of range 1.." + std::to_string(r));
    }
    for (int k = 1; k <= r; ++k) {
      const std::string key = std::to_string(k);
      if (!loops.contains(key)) {
        if (dims[a] == 0) continue;
        fail(lp, "missing direction \"" + key + "\"");
      }
      out.cube.loop(a, k) = matrix_from_json(loops[key], dims[a], dims[a], key_path(lp, key));
    }
  }

  auto read_arrows = [&](const char* name, bool up) {
    std::vector<std::vector<bool>> given(ctx.node_count(), std::vector<bool>(r + 1, false));
    const std::string ap = key_path(root, name);
    if (doc.contains(name)) {
      const Json& arrows = doc[name];
      if (!arrows.is_object()) fail(ap, "expected an object keyed by \"A|k\"");
      for (const auto& [key, m] : arrows.items()) {
        const std::string p = key_path(ap, key);
        const ArrowKey ak = parse_arrow_key(key, r, p);
        const std::size_t deep = dims[ak.stratum];
        const std::size_t shallow = dims[ak.stratum & ~(Mask{1} << (ak.k - 1))];
        if (up) {
          out.cube.up_map(ak.stratum, ak.k) = matrix_from_json(m, deep, shallow, p);
        } else {
          out.cube.down_map(ak.stratum, ak.k) = matrix_from_json(m, shallow, deep, p);
        }
        given[ak.stratum][ak.k] = true;
      }
    }
    for (Mask a = 0; a < ctx.node_count(); ++a) {
      for (int k = 1; k <= r; ++k) {
        if (!StratumIndex{a}.contains(k) || given[a][k]) continue;
        const std::size_t deep = dims[a];
        const std::size_t shallow = dims[a & ~(Mask{1} << (k - 1))];
        if (deep * shallow != 0) fail(ap, "missing arrow " + StratumIndex{a}.label() + "|" + std::to_string(k));
      }
    }
  };
  read_arrows(up_key(out.kind), true);
  read_arrows(down_key(out.kind), false);

  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) fail(key_path(root, "metadata"), "expected an object");
    out.metadata = doc["metadata"];
  }
  out.cube.check_shapes();
  return out;
}

ObjectDocument parse_document_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ShapeError(std::string("invalid JSON: ") + e.what());
  }
  return parse_document(doc);
}

ObjectDocument read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ShapeError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_document_text(ss.str());
  } catch (const ShapeError& e) {
    throw ShapeError(path + ": " + e.what());
  }
}

Json serialize(const ObjectDocument& doc) {
  const Hypercube& c = doc.cube;
  c.check_shapes();
  Json out;
  out["kind"] = kind_name(doc.kind);
  out["context"] = {{"d", c.ctx.ambient_dim}, {"r", c.ctx.divisor_multiplicity}};
  Json nodes = Json::object();
  Json up = Json::object();
  Json down = Json::object();
  for (Mask a = 0; a < c.node_count(); ++a) {
    Json node;
    node["dim"] = c.dims[a];
    Json loops = Json::object();
    for (int k = 1; k <= c.r(); ++k) loops[std::to_string(k)] = matrix_to_json(c.loop(a, k));
    node[loop_key(doc.kind)] = std::move(loops);
    nodes[StratumIndex{a}.label()] = std::move(node);
    for (int k = 1; k <= c.r(); ++k) {
      if (!StratumIndex{a}.contains(k)) continue;
      const std::string key = StratumIndex{a}.label() + "|" + std::to_string(k);
      up[key] = matrix_to_json(c.up_map(a, k));
      down[key] = matrix_to_json(c.down_map(a, k));
    }
  }
  out["nodes"] = std::move(nodes);
  out[up_key(doc.kind)] = std::move(up);
  out[down_key(doc.kind)] = std::move(down);
  if (!doc.metadata.is_null()) out["metadata"] = doc.metadata;
  return out;
}

Json serialize(const PreDModule& e, const Json& metadata) {
  return serialize(ObjectDocument{ObjectKind::pre_d_module, e.cube, metadata});
}

Json serialize(const VerdierObject& v, const Json& metadata) {
  return serialize(ObjectDocument{ObjectKind::verdier, v.cube, metadata});
}

PreDModule as_pre(const ObjectDocument& doc) {
  if (doc.kind != ObjectKind::pre_d_module) throw ShapeError("expected a pre-d-module document, got a verdier-object");
  return {doc.cube};
}

VerdierObject as_verdier(const ObjectDocument& doc) {
  if (doc.kind != ObjectKind::verdier) throw ShapeError("expected a verdier-object document, got a pre-d-module");
  return {doc.cube};
}

Filtration parse_filtration(const Json& j, const Hypercube& cube) {
  const std::string root = "$";
  if (!j.is_object() || !j.contains("grades") || !j.contains("subspaces")) {
    fail(root, "expected {\"grades\": [...], \"subspaces\": [...]}");
  }
  const Json& grades = j["grades"];
  const Json& subs = j["subspaces"];
  if (!grades.is_array() || !subs.is_array() || grades.size() != subs.size()) {
    fail(root, "\"grades\" and \"subspaces\" must be lists of equal length");
  }
  Filtration f;
  for (std::size_t g = 0; g < grades.size(); ++g) {
    if (!grades[g].is_number_integer()) fail(index_path(key_path(root, "grades"), g), "expected an integer");
    f.grades.push_back(grades[g].get<int>());
    if (g > 0 && f.grades[g] <= f.grades[g - 1]) fail(index_path(key_path(root, "grades"), g), "grades must be strictly increasing");
    const std::string sp = index_path(key_path(root, "subspaces"), g);
    if (!subs[g].is_object()) fail(sp, "expected an object keyed by stratum");
    SubspaceFamily fam(cube.node_count());
    for (Mask a = 0; a < cube.node_count(); ++a) fam[a] = CMatrix(cube.dims[a], 0);
    for (const auto& [label, m] : subs[g].items()) {
      const std::string p = key_path(sp, label);
      StratumIndex a;
      try {
        a = StratumIndex::parse_label(label, cube.r());
      } catch (const ShapeError& e) {
        fail(p, e.what());
      }
      const std::size_t n = cube.dims[a.mask];
      if (!m.is_array()) fail(p, "expected a matrix");
      const std::size_t cols = m.empty() ? 0 : (m[0].is_array() ? m[0].size() : 0);
      fam[a.mask] = n == 0 ? CMatrix(0, 0) : matrix_from_json(m, n, cols, p);
    }
    f.subspaces.push_back(std::move(fam));
  }
  return f;
}

Json serialize(const Filtration& f, const Hypercube& cube) {
  Json out;
  out["grades"] = f.grades;
  Json subs = Json::array();
  for (const auto& fam : f.subspaces) {
    Json g = Json::object();
    for (Mask a = 0; a < cube.node_count(); ++a) g[StratumIndex{a}.label()] = matrix_to_json(fam[a]);
    subs.push_back(std::move(g));
  }
  out["subspaces"] = std::move(subs);
  return out;
}

}  // namespace polydisk
