// Copyright 2026 The bmolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bmolab/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bmolab/config.hpp"

namespace bmolab {

namespace {

std::string child_path(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

const Json& field(const Json& doc, const std::string& path, const char* key) {
  if (!doc.is_object()) throw FormatError(path.empty() ? "/" : path, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(child_path(path, key), "missing field");
  return *it;
}

void expect_schema(const Json& doc, const char* schema) {
  const Json& s = field(doc, "", "schema");
  if (!s.is_string() || s.get<std::string>() != schema) {
    throw FormatError("/schema", std::string("expected \"") + schema + "\"");
  }
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw FormatError(path, "expected a number");
  return v.get<double>();
}

long long integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw FormatError(path, "expected an integer");
  return v.get<long long>();
}

const Json& array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw FormatError(path, "expected an array");
  return v;
}

NodeSpec node_from_json(const Json& node, const std::string& path, int remaining) {
  if (remaining < 0) throw FormatError(path, "tree is deeper than its declared depth");
  NodeSpec spec;
  spec.mass = number(field(node, path, "mass"), child_path(path, "mass"));
  const std::string children_path = child_path(path, "children");
  const Json& children = array(field(node, path, "children"), children_path);
  spec.children.reserve(children.size());
  for (std::size_t i = 0; i < children.size(); ++i) {
    spec.children.push_back(node_from_json(
        children[i], child_path(children_path, std::to_string(i)), remaining - 1));
  }
  return spec;
}

Json node_to_json(const NodeSpec& spec) {
  Json node;
  node["mass"] = spec.mass;
  node["children"] = Json::array();
  for (const auto& child : spec.children) node["children"].push_back(node_to_json(child));
  return node;
}

TreePtr tree_field(const Json& doc, const std::filesystem::path& base) {
  const Json& tree = field(doc, "", "tree");
  if (tree.is_string()) {
    std::filesystem::path path = tree.get<std::string>();
    if (path.is_relative()) path = base / path;
    try {
      return tree_from_json(read_json_file(path));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + "#" + e.path(), e.message());
    }
  }
  try {
    return tree_from_json(tree);
  } catch (const FormatError& e) {
    throw FormatError("/tree" + e.path(), e.message());
  }
}

std::vector<double> number_row(const Json& row, const std::string& path) {
  array(row, path);
  std::vector<double> out;
  out.reserve(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    out.push_back(number(row[i], child_path(path, std::to_string(i))));
  }
  return out;
}

Json number_array(std::span<const double> values) {
  Json out = Json::array();
  for (double v : values) out.push_back(v);
  return out;
}

// Re-raises construction errors (std::invalid_argument) as FormatError.
template <typename F>
auto construct(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw FormatError(path, e.what());
  }
}

}  // namespace

Json tree_to_json(const FiltrationTree& tree) {
  Json doc;
  doc["schema"] = "tree/v1";
  doc["depth"] = tree.depth();
  doc["root"] = node_to_json(tree.to_spec());
  return doc;
}

TreePtr tree_from_json(const Json& doc) {
  expect_schema(doc, "tree/v1");
  const long long depth = integer(field(doc, "", "depth"), "/depth");
  if (depth < 0) throw FormatError("/depth", "depth must be nonnegative");
  if (depth > kMaxDepth) throw SizeError("tree depth exceeds the cap of " + std::to_string(kMaxDepth));
  const NodeSpec root = node_from_json(field(doc, "", "root"), "/root", static_cast<int>(depth));
  return std::make_shared<const FiltrationTree>(
      FiltrationTree::from_spec(static_cast<int>(depth), root));
}

Json process_to_json(const AdaptedProcess& process) {
  Json doc;
  doc["schema"] = "process/v1";
  doc["tree"] = tree_to_json(process.tree());
  doc["dim"] = process.dim();
  doc["levels"] = Json::array();
  for (const auto& level : process.levels()) doc["levels"].push_back(number_array(level));
  return doc;
}

AdaptedProcess process_from_json(const Json& doc, const std::filesystem::path& base) {
  expect_schema(doc, "process/v1");
  TreePtr tree = tree_field(doc, base);
  const long long dim = integer(field(doc, "", "dim"), "/dim");
  if (dim < 1) throw FormatError("/dim", "dimension must be positive");
  const Json& levels = array(field(doc, "", "levels"), "/levels");
  if (levels.size() != static_cast<std::size_t>(tree->depth()) + 1) {
    throw FormatError("/levels", "expected " + std::to_string(tree->depth() + 1) + " levels");
  }
  std::vector<std::vector<double>> values;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    const std::string path = "/levels/" + std::to_string(n);
    values.push_back(number_row(levels[n], path));
    if (values.back().size() != tree->atom_count(static_cast<int>(n)) * dim) {
      throw FormatError(path, "expected " +
                                  std::to_string(tree->atom_count(static_cast<int>(n)) * dim) +
                                  " values");
    }
  }
  return construct("/levels", [&] {
    return AdaptedProcess(tree, static_cast<int>(dim), std::move(values));
  });
}

Json rv_to_json(const RandomVariable& x) {
  Json doc;
  doc["schema"] = "rv/v1";
  doc["tree"] = tree_to_json(x.tree());
  doc["dim"] = x.dim();
  doc["leaves"] = Json::array();
  for (std::size_t leaf = 0; leaf < x.leaf_count(); ++leaf) {
    doc["leaves"].push_back(number_array(x.at(leaf)));
  }
  return doc;
}

RandomVariable rv_from_json(const Json& doc, const std::filesystem::path& base) {
  expect_schema(doc, "rv/v1");
  TreePtr tree = tree_field(doc, base);
  const long long dim = integer(field(doc, "", "dim"), "/dim");
  if (dim < 1) throw FormatError("/dim", "dimension must be positive");
  const Json& leaves = array(field(doc, "", "leaves"), "/leaves");
  if (leaves.size() != tree->leaf_count()) {
    throw FormatError("/leaves", "expected " + std::to_string(tree->leaf_count()) + " leaves");
  }
  std::vector<double> values;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const std::string path = "/leaves/" + std::to_string(i);
    auto row = number_row(leaves[i], path);
    if (row.size() != static_cast<std::size_t>(dim)) {
      throw FormatError(path, "expected " + std::to_string(dim) + " coordinates");
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  return construct("/leaves", [&] {
    return RandomVariable(tree, static_cast<int>(dim), std::move(values));
  });
}

Json tau_to_json(const StoppingTime& tau) {
  Json doc;
  doc["schema"] = "tau/v1";
  doc["stops"] = Json::array();
  for (const AtomRef& stop : tau.stops()) doc["stops"].push_back({stop.level, stop.index});
  return doc;
}

StoppingTime tau_from_json(const Json& doc, const TreePtr& tree) {
  expect_schema(doc, "tau/v1");
  const Json& stops = array(field(doc, "", "stops"), "/stops");
  std::vector<AtomRef> atoms;
  for (std::size_t i = 0; i < stops.size(); ++i) {
    const std::string path = "/stops/" + std::to_string(i);
    if (!stops[i].is_array() || stops[i].size() != 2) {
      throw FormatError(path, "expected [level, index]");
    }
    AtomRef atom{static_cast<int>(integer(stops[i][0], path + "/0")),
                 static_cast<int>(integer(stops[i][1], path + "/1"))};
    try {
      tree->check_atom(atom);
    } catch (const std::out_of_range& e) {
      throw FormatError(path, e.what());
    }
    atoms.push_back(atom);
  }
  return construct("/stops", [&] { return StoppingTime(tree, std::move(atoms)); });
}

Json measure_to_json(const CarlesonMeasure& mu) {
  Json doc;
  doc["schema"] = "measure/v1";
  doc["tree"] = tree_to_json(mu.tree());
  doc["densities"] = Json::array();
  for (const auto& density : mu.densities()) doc["densities"].push_back(number_array(density));
  return doc;
}

CarlesonMeasure measure_from_json(const Json& doc, const std::filesystem::path& base) {
  expect_schema(doc, "measure/v1");
  TreePtr tree = tree_field(doc, base);
  const Json& densities = array(field(doc, "", "densities"), "/densities");
  if (densities.size() != static_cast<std::size_t>(tree->depth()) + 1) {
    throw FormatError("/densities", "expected " + std::to_string(tree->depth() + 1) + " densities");
  }
  std::vector<std::vector<double>> values;
  for (std::size_t k = 0; k < densities.size(); ++k) {
    const std::string path = "/densities/" + std::to_string(k);
    values.push_back(number_row(densities[k], path));
    if (values.back().size() != tree->leaf_count()) {
      throw FormatError(path, "expected " + std::to_string(tree->leaf_count()) + " values");
    }
  }
  return construct("/densities", [&] { return CarlesonMeasure(tree, std::move(values)); });
}

Json witness_to_json(const Witness& witness) {
  if (const auto* tau = std::get_if<StoppingTime>(&witness)) return tau_to_json(*tau);
  const auto& set = std::get<AtomSetWitness>(witness);
  Json doc;
  doc["level"] = set.level;
  doc["atoms"] = set.atoms;
  return doc;
}

Json norm_result_to_json(const NormResult& result) {
  Json doc;
  doc["value"] = result.value;
  doc["witness"] = witness_to_json(result.witness);
  doc["mode"] = result.mode;
  return doc;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("/", "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("/", std::string("malformed JSON in ") + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace bmolab
