#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tatekit/global_sha.hpp"
#include "tatekit/splitting_bound.hpp"

namespace tatekit::io {

using Json = nlohmann::json;

// Reading helpers carry a JSON-pointer-like path for diagnostics.
inline Error schema(const std::string& path, const std::string& what) {
  return Error(ErrorCode::SchemaError, path + ": " + what);
}

inline const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw schema(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw schema(path + "/" + key, "missing field");
  return *it;
}

// Decimal strings; plain JSON integers are accepted as well.
inline Int read_int(const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return parse_int(j.get<std::string>());
    } catch (const Error&) {
      throw schema(path, "not a decimal integer");
    }
  }
  if (j.is_number_integer()) return Int(j.get<long long>());
  throw schema(path, "expected a decimal string");
}

inline std::size_t read_size(const Json& j, const std::string& path) {
  Int v = read_int(j, path);
  if (v < 0 || v > Int(std::numeric_limits<std::uint32_t>::max())) throw schema(path, "out of range");
  return static_cast<std::size_t>(v);
}

inline long long read_ll(const Json& j, const std::string& path) {
  Int v = read_int(j, path);
  if (v < std::numeric_limits<long long>::min() || v > std::numeric_limits<long long>::max()) throw schema(path, "out of range");
  return static_cast<long long>(v);
}

inline IntVector read_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) throw schema(path, "expected an array");
  IntVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_int(j[i], path + "/" + std::to_string(i)));
  return v;
}

inline std::vector<std::size_t> read_indices(const Json& j, const std::string& path) {
  if (!j.is_array()) throw schema(path, "expected an array");
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(read_size(j[i], path + "/" + std::to_string(i)));
  return v;
}

inline IntMatrix read_matrix(const Json& j, const std::string& path) {
  if (!j.is_array()) throw schema(path, "expected an array of rows");
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(read_vector(j[i], path + "/" + std::to_string(i)));
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw schema(path + "/" + std::to_string(i), "ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rows[i][c];
  }
  return m;
}

inline Json write_int(const Int& v) { return v.str(); }

inline Json write_vector(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline Json write_indices(const std::vector<std::size_t>& v) {
  Json a = Json::array();
  for (std::size_t x : v) a.push_back(std::to_string(x));
  return a;
}

inline Json write_matrix(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(write_vector(m.row(i)));
  return a;
}

inline Json write_group(const FinAbGroup& g) {
  Json j;
  j["invariant_factors"] = write_vector(g.invariant_factors());
  j["free_rank"] = std::to_string(g.free_rank());
  if (auto o = g.order()) j["order"] = o->str();
  return j;
}

// {"order", "mul_table"}, {"permutations"}, or a named family:
// {"cyclic": n}, {"dihedral": k}, {"symmetric": d}, {"klein_four": true},
// {"quaternion": true}, {"product": [g, h]}.
inline FiniteGroup read_finite_group(const Json& j, const std::string& path) {
  if (!j.is_object()) throw schema(path, "expected a group object");
  try {
    if (j.contains("mul_table")) {
      const Json& t = j["mul_table"];
      if (!t.is_array()) throw schema(path + "/mul_table", "expected an array of rows");
      FiniteGroup::Table table;
      for (std::size_t i = 0; i < t.size(); ++i) table.push_back(read_indices(t[i], path + "/mul_table/" + std::to_string(i)));
      if (j.contains("order") && read_size(j["order"], path + "/order") != table.size())
        throw schema(path + "/order", "does not match the table");
      return FiniteGroup(std::move(table));
    }
    if (j.contains("permutations")) {
      const Json& p = j["permutations"];
      if (!p.is_array()) throw schema(path + "/permutations", "expected an array");
      std::vector<std::vector<std::size_t>> gens;
      for (std::size_t i = 0; i < p.size(); ++i) gens.push_back(read_indices(p[i], path + "/permutations/" + std::to_string(i)));
      return FiniteGroup::from_permutations(gens);
    }
    if (j.contains("cyclic")) {
      std::size_t n = read_size(j["cyclic"], path + "/cyclic");
      if (n == 0) throw schema(path + "/cyclic", "must be positive");
      return FiniteGroup::cyclic(n);
    }
    if (j.contains("dihedral")) return FiniteGroup::dihedral(read_size(j["dihedral"], path + "/dihedral"));
    if (j.contains("symmetric")) return FiniteGroup::symmetric(read_size(j["symmetric"], path + "/symmetric"));
    if (j.contains("klein_four")) return FiniteGroup::klein_four();
    if (j.contains("quaternion")) return FiniteGroup::quaternion();
    if (j.contains("product")) {
      const Json& p = j["product"];
      if (!p.is_array() || p.size() != 2) throw schema(path + "/product", "expected two groups");
      return FiniteGroup::direct_product(read_finite_group(p[0], path + "/product/0"),
                                         read_finite_group(p[1], path + "/product/1"));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    throw Error(e.code(), path + ": " + e.message());
  }
  throw schema(path, "unrecognized group description");
}

inline GroupPtr read_group(const Json& j, const std::string& path) { return make_group(read_finite_group(j, path)); }

inline Subgroup read_subgroup(const GroupPtr& g, const Json& j, const std::string& path) {
  std::vector<std::size_t> members = read_indices(j, path);
  for (std::size_t m : members)
    if (m >= g->order()) throw schema(path, "element index out of range");
  try {
    return Subgroup::from_members(g, members);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

// {"rank", "generators": [{"element_index", "matrix"}]}, {"trivial": r},
// {"permutation": members}, {"augmentation": members}, {"direct_sum": [...]}.
inline GModule read_module(const GroupPtr& g, const Json& j, const std::string& path) {
  if (!j.is_object()) throw schema(path, "expected a module object");
  try {
    if (j.contains("generators")) {
      const std::size_t rank = read_size(field(j, "rank", path), path + "/rank");
      const Json& gens = j["generators"];
      if (!gens.is_array()) throw schema(path + "/generators", "expected an array");
      std::vector<std::pair<std::size_t, IntMatrix>> acts;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::string p = path + "/generators/" + std::to_string(i);
        std::size_t e = read_size(field(gens[i], "element_index", p), p + "/element_index");
        if (e >= g->order()) throw schema(p + "/element_index", "out of range");
        acts.emplace_back(e, read_matrix(field(gens[i], "matrix", p), p + "/matrix"));
      }
      return GModule::from_generators(g, rank, acts);
    }
    if (j.contains("trivial")) return GModule::trivial(g, read_size(j["trivial"], path + "/trivial"));
    if (j.contains("permutation")) return permutation_module(read_subgroup(g, j["permutation"], path + "/permutation"));
    if (j.contains("augmentation")) {
      Subgroup h = read_subgroup(g, j["augmentation"], path + "/augmentation");
      if (h.index() < 2) throw schema(path + "/augmentation", "subgroup must be proper");
      return augmentation_module(h);
    }
    if (j.contains("direct_sum")) {
      const Json& parts = j["direct_sum"];
      if (!parts.is_array() || parts.empty()) throw schema(path + "/direct_sum", "expected a nonempty array");
      std::vector<GModule> mods;
      for (std::size_t i = 0; i < parts.size(); ++i) mods.push_back(read_module(g, parts[i], path + "/direct_sum/" + std::to_string(i)));
      return GModule::direct_sum(mods);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    throw Error(e.code(), path + ": " + e.message());
  }
  throw schema(path, "unrecognized module description");
}

// {theta, module, places: [{label, decomposition_members}]}.
inline GlobalData read_global_data(const Json& j, const std::string& path) {
  GroupPtr theta = read_group(field(j, "theta", path), path + "/theta");
  GlobalData d{theta, read_module(theta, field(j, "module", path), path + "/module"), {}};
  const Json& places = field(j, "places", path);
  if (!places.is_array()) throw schema(path + "/places", "expected an array");
  for (std::size_t i = 0; i < places.size(); ++i) {
    const std::string p = path + "/places/" + std::to_string(i);
    const Json& label = field(places[i], "label", p);
    if (!label.is_string()) throw schema(p + "/label", "expected a string");
    for (const auto& other : d.places)
      if (other.label == label.get<std::string>()) throw schema(p + "/label", "duplicate label");
    d.places.push_back({label.get<std::string>(), read_subgroup(theta, field(places[i], "decomposition_members", p),
                                                                 p + "/decomposition_members")});
  }
  return d;
}

inline AbElement read_element(const FinAbGroup& g, const Json& j, const std::string& path) {
  IntVector c = read_vector(j, path);
  if (c.size() != g.num_coords()) throw schema(path, "expected " + std::to_string(g.num_coords()) + " coordinates");
  return g.reduce(std::move(c));
}

inline Json write_element(const AbElement& e) { return write_vector(e.coords); }

}  // namespace tatekit::io
