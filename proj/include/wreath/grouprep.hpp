#pragma once

// Finite groups F described by their irreducible representation data: the
// pointed dual (F^, trivial) and the pointed set (Min F, p_F) of minimal
// projection classes, together with the finite-group assembly bijection.

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wreath/exact.hpp"

namespace wreath {

/// Index into a pointed label set; 0 is always the basepoint.
using Label = std::uint32_t;
inline constexpr Label kBasepoint = 0;

class GroupSpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A finite pointed set of named labels.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::string name, std::vector<std::string> labels)
      : name_(std::move(name)), labels_(std::move(labels)) {
    if (labels_.size() < 2) {
      throw GroupSpecError("label set '" + name_ +
                           "' needs a basepoint and at least one other label");
    }
    for (Label i = 0; i < labels_.size(); ++i) {
      if (!index_.emplace(labels_[i], i).second) {
        throw GroupSpecError("duplicate label '" + labels_[i] + "'");
      }
    }
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& operator[](Label l) const { return labels_.at(l); }
  const std::string& basepoint() const { return labels_.front(); }

  std::optional<Label> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Label> index_;
};

struct IrrepLabel {
  std::string id;
  int dim = 1;
  bool trivial = false;
};

struct MinProjLabel {
  std::string id;
  Rational trace;
  bool basepoint = false;
};

/// Multiplication table of F on elements 0..order-1, element 0 the identity.
class GroupTable {
 public:
  GroupTable() = default;
  explicit GroupTable(std::vector<std::vector<int>> table)
      : order_(static_cast<int>(table.size())) {
    mul_.reserve(static_cast<std::size_t>(order_) * order_);
    for (const auto& row : table) {
      if (static_cast<int>(row.size()) != order_) {
        throw GroupSpecError("multiplication table is not square");
      }
      for (int x : row) {
        if (x < 0 || x >= order_) {
          throw GroupSpecError("multiplication table entry out of range");
        }
        mul_.push_back(x);
      }
    }
    validate();
  }

  int order() const { return order_; }
  int mul(int a, int b) const {
    return mul_[static_cast<std::size_t>(a) * order_ + b];
  }
  int inv(int a) const { return inv_[a]; }

 private:
  void validate() {
    for (int a = 0; a < order_; ++a) {
      if (mul(0, a) != a || mul(a, 0) != a) {
        throw GroupSpecError("element 0 is not the identity of the table");
      }
    }
    inv_.assign(order_, -1);
    for (int a = 0; a < order_; ++a) {
      for (int b = 0; b < order_; ++b) {
        if (mul(a, b) == 0) inv_[a] = b;
      }
      if (inv_[a] < 0 || mul(inv_[a], a) != 0) {
        throw GroupSpecError("table element without two-sided inverse");
      }
    }
    for (int a = 0; a < order_; ++a)
      for (int b = 0; b < order_; ++b)
        for (int c = 0; c < order_; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
            throw GroupSpecError("multiplication table is not associative");
          }
  }

  int order_ = 0;
  std::vector<int> mul_;
  std::vector<int> inv_;
};

class FiniteGroupSpec {
 public:
  FiniteGroupSpec(std::string name, int order, std::vector<IrrepLabel> irreps,
                  std::optional<GroupTable> table = std::nullopt)
      : name_(std::move(name)), order_(order), table_(std::move(table)) {
    if (order_ < 2) {
      throw GroupSpecError("group order must be >= 2 (F non-trivial), got " +
                           std::to_string(order_));
    }
    const auto trivial_count =
        std::count_if(irreps.begin(), irreps.end(),
                      [](const IrrepLabel& r) { return r.trivial; });
    if (trivial_count != 1) {
      throw GroupSpecError("exactly one irrep must be marked trivial, found " +
                           std::to_string(trivial_count));
    }
    long long burnside = 0;
    for (const auto& r : irreps) {
      if (r.dim < 1) {
        throw GroupSpecError("irrep '" + r.id + "' has non-positive dimension");
      }
      if (r.trivial && r.dim != 1) {
        throw GroupSpecError("trivial irrep '" + r.id + "' must have dim 1");
      }
      burnside += static_cast<long long>(r.dim) * r.dim;
    }
    if (burnside != order_) {
      throw GroupSpecError("Burnside identity violated: sum of dim^2 = " +
                           std::to_string(burnside) + " but order = " +
                           std::to_string(order_));
    }
    if (table_ && table_->order() != order_) {
      throw GroupSpecError("multiplication table has " +
                           std::to_string(table_->order()) +
                           " elements but order = " + std::to_string(order_));
    }
    // Trivial irrep first: its position is the basepoint of both label sets.
    std::stable_partition(irreps.begin(), irreps.end(),
                          [](const IrrepLabel& r) { return r.trivial; });
    irreps_ = std::move(irreps);
    std::vector<std::string> hat, min;
    for (const auto& r : irreps_) {
      hat.push_back(r.id);
      min.push_back(min_projection_id(r.id));
    }
    dual_ = LabelSet(name_ + "^", std::move(hat));
    min_ = LabelSet("Min " + name_, std::move(min));
  }

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  const std::vector<IrrepLabel>& irreps() const { return irreps_; }
  const std::optional<GroupTable>& table() const { return table_; }

  /// (F^, trivial representation).
  const LabelSet& dual() const { return dual_; }
  /// (Min F, p_F).
  const LabelSet& min_projections() const { return min_; }

  const IrrepLabel& irrep(const std::string& id) const {
    auto l = dual_.find(id);
    if (!l) throw GroupSpecError("unknown irrep '" + id + "' in " + name_);
    return irreps_[*l];
  }

  MinProjLabel min_projection(Label l) const {
    const auto& r = irreps_.at(l);
    return {min_[l], Rational(r.dim, order_), r.trivial};
  }

  /// Trace of a Min F label: dim / |F|.
  Rational trace(Label min_label) const {
    return Rational(irreps_.at(min_label).dim, order_);
  }

  static std::string min_projection_id(const std::string& irrep_id) {
    return "p_" + irrep_id;
  }

 private:
  std::string name_;
  int order_;
  std::vector<IrrepLabel> irreps_;
  std::optional<GroupTable> table_;
  LabelSet dual_;
  LabelSet min_;
};

/// pi -> e_pi. Sends the trivial irrep to p_F and preserves dimension.
inline MinProjLabel mu_F(const FiniteGroupSpec& spec, const IrrepLabel& pi) {
  auto l = spec.dual().find(pi.id);
  if (!l || spec.irreps()[*l].dim != pi.dim ||
      spec.irreps()[*l].trivial != pi.trivial) {
    throw GroupSpecError("irrep '" + pi.id + "' does not belong to " +
                         spec.name());
  }
  return spec.min_projection(*l);
}

/// Label-level form of mu_F between the two pointed label sets.
inline Label mu_F(const FiniteGroupSpec& spec, Label irrep_label) {
  const auto target = mu_F(spec, spec.irreps().at(irrep_label));
  return *spec.min_projections().find(target.id);
}

namespace detail {

inline GroupTable cyclic_table(int m) {
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  return GroupTable(std::move(t));
}

inline GroupTable symmetric3_table() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto index = [&](const std::array<int, 3>& q) {
    return static_cast<int>(std::find(perms.begin(), perms.end(), q) -
                            perms.begin());
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = index(c);
    }
  return GroupTable(std::move(t));
}

// r^k s^e stored as k + 4e; s r s = r^-1.
inline GroupTable dihedral4_table() {
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const int a = x % 4, b = x / 4, c = y % 4, d = y / 4;
      const int k = ((a + (b ? -c : c)) % 4 + 4) % 4;
      t[x][y] = k + 4 * ((b + d) % 2);
    }
  return GroupTable(std::move(t));
}

// 1, -1, i, -i, j, -j, k, -k.
inline GroupTable quaternion_table() {
  // unit products of {1, i, j, k} as (sign, unit)
  const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1},
                          {1, 1, -1, -1}};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      const int ux = x / 2, uy = y / 2;
      int s = (x % 2 ? -1 : 1) * (y % 2 ? -1 : 1) * sign[ux][uy];
      t[x][y] = 2 * unit[ux][uy] + (s < 0 ? 1 : 0);
    }
  return GroupTable(std::move(t));
}

inline IrrepLabel irrep(std::string id, int dim, bool trivial = false) {
  return {std::move(id), dim, trivial};
}

}  // namespace detail

/// Z<m> for m >= 2, S3, D4, Q8.
inline FiniteGroupSpec builtin_group(const std::string& name) {
  using detail::irrep;
  if (name == "Z2") {
    return {"Z2", 2, {irrep("triv", 1, true), irrep("sgn", 1)},
            detail::cyclic_table(2)};
  }
  if (name.size() > 1 && name[0] == 'Z' &&
      std::all_of(name.begin() + 1, name.end(),
                  [](char c) { return c >= '0' && c <= '9'; }) &&
      name[1] != '0' && name.size() <= 4) {
    const int m = std::stoi(name.substr(1));
    if (m >= 2) {
      std::vector<IrrepLabel> irreps{irrep("triv", 1, true)};
      for (int k = 1; k < m; ++k) irreps.push_back(irrep("chi" + std::to_string(k), 1));
      return {name, m, std::move(irreps), detail::cyclic_table(m)};
    }
  }
  if (name == "S3") {
    return {"S3", 6, {irrep("triv", 1, true), irrep("sgn", 1), irrep("std", 2)},
            detail::symmetric3_table()};
  }
  if (name == "D4") {
    return {"D4", 8,
            {irrep("triv", 1, true), irrep("chi_r", 1), irrep("chi_s", 1),
             irrep("chi_rs", 1), irrep("rho", 2)},
            detail::dihedral4_table()};
  }
  if (name == "Q8") {
    return {"Q8", 8,
            {irrep("triv", 1, true), irrep("chi_i", 1), irrep("chi_j", 1),
             irrep("chi_k", 1), irrep("rho", 2)},
            detail::quaternion_table()};
  }
  throw GroupSpecError("unknown built-in group '" + name + "'");
}

/// The built-ins exercised by the verification suites (Z4 stands for Zm).
inline std::vector<std::string> shipped_builtins() {
  return {"Z2", "Z3", "Z4", "S3", "D4", "Q8"};
}

/// Parses a group document (YAML or JSON):
///   name: S3
///   order: 6
///   irreps: [{id: triv, dim: 1, trivial: true}, ...]
///   table: [[0, 1, ...], ...]   # optional, element 0 = identity
inline FiniteGroupSpec load_group(const std::string& document) {
  YAML::Node root;
  try {
    root = YAML::Load(document);
  } catch (const YAML::Exception& e) {
    throw GroupSpecError(std::string("malformed group document: ") + e.what());
  }
  try {
    if (!root.IsMap()) throw GroupSpecError("group document must be a map");
    for (const char* key : {"name", "order", "irreps"}) {
      if (!root[key]) {
        throw GroupSpecError(std::string("group document lacks field '") +
                             key + "'");
      }
    }
    std::vector<IrrepLabel> irreps;
    for (const auto& node : root["irreps"]) {
      if (!node["id"] || !node["dim"]) {
        throw GroupSpecError("irrep entry needs 'id' and 'dim'");
      }
      irreps.push_back({node["id"].as<std::string>(), node["dim"].as<int>(),
                        node["trivial"] ? node["trivial"].as<bool>() : false});
    }
    std::optional<GroupTable> table;
    if (root["table"]) {
      table = GroupTable(root["table"].as<std::vector<std::vector<int>>>());
    }
    return {root["name"].as<std::string>(), root["order"].as<int>(),
            std::move(irreps), std::move(table)};
  } catch (const YAML::Exception& e) {
    throw GroupSpecError(std::string("bad field in group document: ") +
                         e.what());
  }
}

inline FiniteGroupSpec load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GroupSpecError("cannot open group document '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_group(buffer.str());
}

/// A built-in name, or else a path to a group document.
inline FiniteGroupSpec resolve_group(const std::string& name_or_path) {
  try {
    return builtin_group(name_or_path);
  } catch (const GroupSpecError&) {
  }
  return load_group_file(name_or_path);
}

}  // namespace wreath
