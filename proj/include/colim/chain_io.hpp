#pragma once

// Chain description files: a single JSON document holding a chain, and
// optionally a cocone over it. Complex scalars serialize as [re, im],
// matrices as row-major nested arrays.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "colim/chain.hpp"
#include "colim/colimit.hpp"
#include "colim/errors.hpp"
#include "colim/linalg.hpp"

namespace colim {

using json = nlohmann::json;

inline json to_json(Scalar z) { return json::array({z.real(), z.imag()}); }

inline Scalar scalar_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("expected a complex scalar as [re, im], got " + j.dump());
  return Scalar{j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const FinVector& x) {
  json j = json::array();
  for (int i = 0; i < x.dim(); ++i) j.push_back(to_json(x[i]));
  return j;
}

inline FinVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a non-empty vector array");
  std::vector<Scalar> e;
  e.reserve(j.size());
  for (const json& z : j) e.push_back(scalar_from_json(z));
  return FinVector(std::move(e));
}

inline json to_json(const Operator& g) {
  json rows = json::array();
  for (int i = 0; i < g.out_dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < g.in_dim(); ++j) row.push_back(to_json(g(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Operator operator_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a matrix as nested row arrays");
  std::vector<std::vector<Scalar>> rows;
  rows.reserve(j.size());
  for (const json& r : j) {
    if (!r.is_array() || r.empty()) throw ParseError("expected a non-empty matrix row");
    std::vector<Scalar> row;
    row.reserve(r.size());
    for (const json& z : r) row.push_back(scalar_from_json(z));
    rows.push_back(std::move(row));
  }
  try {
    return Operator::from_rows(rows);
  } catch (const DimensionMismatch& e) {
    throw ParseError(std::string("bad matrix: ") + e.what());
  }
}

inline MapCategory category_from_string(const std::string& s) {
  if (s == "isometry") return MapCategory::isometry;
  if (s == "contraction") return MapCategory::contraction;
  if (s == "bounded") return MapCategory::bounded;
  throw ParseError("unknown category '" + s + "'");
}

inline json to_json(const TailRule& t) {
  json j;
  j["kind"] = to_string(t.kind);
  if (t.kind == TailKind::scalar_geometric) j["ratio"] = to_json(t.ratio);
  if (t.kind == TailKind::embed_increment && t.block != 1) j["block"] = t.block;
  return j;
}

inline TailRule tail_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("tail rule needs a \"kind\" tag");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "repeat_last") return TailRule::repeat_last();
  if (kind == "identity") return TailRule::identity();
  if (kind == "scalar_geometric") {
    if (!j.contains("ratio")) throw ParseError("scalar_geometric tail needs a ratio");
    return TailRule::scalar_geometric(scalar_from_json(j.at("ratio")));
  }
  if (kind == "embed_increment") return TailRule::embed_increment(j.value("block", 1));
  throw ParseError("unknown tail kind '" + kind + "'");
}

inline json chain_to_json(const OmegaChain& c) {
  json j;
  j["category"] = to_string(c.category());
  j["prefix_dims"] = c.prefix_dims();
  json maps = json::array();
  for (const Operator& m : c.prefix_maps()) maps.push_back(to_json(m));
  j["prefix_maps"] = std::move(maps);
  j["tail"] = to_json(c.tail());
  return j;
}

inline OmegaChain chain_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("chain description must be a JSON object");
  for (const char* key : {"category", "prefix_dims", "prefix_maps", "tail"})
    if (!j.contains(key)) throw ParseError(std::string("chain description misses \"") + key + "\"");
  std::vector<int> dims;
  for (const json& d : j.at("prefix_dims")) {
    if (!d.is_number_integer()) throw ParseError("prefix_dims must be integers");
    dims.push_back(d.get<int>());
  }
  std::vector<Operator> maps;
  for (const json& m : j.at("prefix_maps")) maps.push_back(operator_from_json(m));
  try {
    return OmegaChain(std::move(dims), std::move(maps), tail_from_json(j.at("tail")),
                      category_from_string(j.at("category").get<std::string>()));
  } catch (const InvalidStructure& e) {
    throw ParseError(std::string("inconsistent chain description: ") + e.what());
  }
}

inline json cocone_to_json(const Cocone& a) {
  json j;
  j["category"] = to_string(a.category());
  j["target_dim"] = a.target_dim();
  json comps = json::array();
  for (const Operator& m : a.prefix_components()) comps.push_back(to_json(m));
  j["prefix_components"] = std::move(comps);
  json tail;
  tail["kind"] = to_string(a.tail().kind);
  if (a.tail().kind == CoconeTailKind::scalar_geometric) tail["ratio"] = to_json(a.tail().ratio);
  if (a.tail().kind == CoconeTailKind::coordinate_weights) {
    json w = json::array();
    for (const Scalar& z : a.tail().weights) w.push_back(to_json(z));
    tail["weights"] = std::move(w);
  }
  j["tail"] = std::move(tail);
  return j;
}

inline Cocone cocone_from_json(const json& j, const OmegaChain& chain) {
  if (!j.is_object()) throw ParseError("cocone description must be a JSON object");
  for (const char* key : {"category", "target_dim", "prefix_components", "tail"})
    if (!j.contains(key)) throw ParseError(std::string("cocone description misses \"") + key + "\"");
  std::vector<Operator> comps;
  for (const json& m : j.at("prefix_components")) comps.push_back(operator_from_json(m));
  const json& t = j.at("tail");
  if (!t.is_object() || !t.contains("kind")) throw ParseError("cocone tail needs a \"kind\" tag");
  const std::string kind = t.at("kind").get<std::string>();
  CoconeTail tail = CoconeTail::repeat_last();
  if (kind == "scalar_geometric") {
    if (!t.contains("ratio")) throw ParseError("scalar_geometric cocone tail needs a ratio");
    tail = CoconeTail::scalar_geometric(scalar_from_json(t.at("ratio")));
  } else if (kind == "coordinate_weights") {
    if (!t.contains("weights")) throw ParseError("coordinate_weights cocone tail needs weights");
    std::vector<Scalar> w;
    for (const json& z : t.at("weights")) w.push_back(scalar_from_json(z));
    tail = CoconeTail::coordinate_weights(std::move(w));
  } else if (kind != "repeat_last") {
    throw ParseError("unknown cocone tail kind '" + kind + "'");
  }
  try {
    return Cocone(chain, j.at("target_dim").get<int>(), std::move(comps), std::move(tail),
                  category_from_string(j.at("category").get<std::string>()));
  } catch (const InvalidStructure& e) {
    throw ParseError(std::string("inconsistent cocone description: ") + e.what());
  }
}

struct ChainFile {
  OmegaChain chain;
  std::optional<Cocone> cocone;
};

inline ChainFile parse_chain_file(const json& j) {
  OmegaChain chain = chain_from_json(j);
  std::optional<Cocone> cocone;
  if (j.contains("cocone")) cocone = cocone_from_json(j.at("cocone"), chain);
  return {std::move(chain), std::move(cocone)};
}

inline json chain_file_to_json(const ChainFile& f) {
  json j = chain_to_json(f.chain);
  if (f.cocone) j["cocone"] = cocone_to_json(*f.cocone);
  return j;
}

// Parse and insist the chain actually belongs to its declared category.
inline ChainFile load_chain_file(const std::string& path, double tol = 1e-9) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  ChainFile f = parse_chain_file(j);
  const CheckReport rep = validate_chain(f.chain, tol);
  if (!rep.ok) {
    std::ostringstream msg;
    msg << "'" << path << "': chain violates its declared category:";
    for (const CheckItem& it : rep.items)
      if (!it.pass) msg << " " << it.name << " (" << it.note << ", norm " << it.residual << ")";
    throw CategoryViolation(msg.str());
  }
  return f;
}

}  // namespace colim
