#pragma once

// JSON documents:
//   {"kind": "pre-d-module" | "verdier-object",
//    "context": {"d": 2, "r": 2},
//    "nodes": {"[]": {"dim": 1, "theta": {"1": M, "2": M}}, "[1]": {...}, ...},
//    "t": {"[1]|1": M, ...}, "s": {...},          (pre-d-module)
//    "metadata": {...}}                            (optional)
// Verdier objects use "mono", "C", "V". A matrix M is a list of rows, each a list
// of [re, im] pairs (a bare number is read as a real entry).

#include <string>

#include <json.hpp>

#include "polydisk/hypercube.hpp"
#include "polydisk/predmod.hpp"
#include "polydisk/verdier.hpp"

namespace polydisk {

using Json = nlohmann::json;

struct ObjectDocument {
  ObjectKind kind = ObjectKind::pre_d_module;
  Hypercube cube;
  Json metadata;  // null when absent
};

const char* kind_name(ObjectKind kind);

/// ShapeError with a "$.path: message" diagnostic on any malformation.
ObjectDocument parse_document(const Json& doc);
ObjectDocument parse_document_text(const std::string& text);
ObjectDocument read_document(const std::string& path);

Json serialize(const ObjectDocument& doc);
Json serialize(const PreDModule& e, const Json& metadata = nullptr);
Json serialize(const VerdierObject& v, const Json& metadata = nullptr);

PreDModule as_pre(const ObjectDocument& doc);
VerdierObject as_verdier(const ObjectDocument& doc);

Json complex_to_json(Complex z);
Json matrix_to_json(const CMatrix& m);
/// Parses a matrix of known shape; `path` prefixes diagnostics.
CMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const std::string& path);
/// Parses a matrix of any shape (rows of equal length); an empty list is 0 x 0.
CMatrix matrix_from_json(const Json& j, const std::string& path);

/// {"grades": [0, 1, 2], "subspaces": [{"[]": M, "[1]": M, ...}, ...]} where each M
/// has dim rows and spans F_p(A) by its columns; missing nodes mean zero subspaces.
Filtration parse_filtration(const Json& j, const Hypercube& cube);
Json serialize(const Filtration& f, const Hypercube& cube);

}  // namespace polydisk
