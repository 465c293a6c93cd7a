#pragma once

// Finitely supported configurations F^(F_n) under left translation by F_n:
// support trees, barycentres, admissibility and canonical orbit
// representatives, plus a brute-force union-find oracle for the orbit space.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "wreath/freegroup.hpp"
#include "wreath/grouprep.hpp"

namespace wreath {

/// A finitely supported map F_n -> labels. Basepoint values are never stored,
/// so the empty configuration is the constant-basepoint map 1_p.
class Config {
 public:
  using Entry = std::pair<Word, Label>;

  Config() = default;

  /// Basepoint entries are dropped; a word may appear only once.
  static Config from_entries(std::vector<Entry> entries) {
    std::erase_if(entries, [](const Entry& e) { return e.second == kBasepoint; });
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return shortlex_less(a.first, b.first);
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (entries[i].first == entries[i - 1].first) {
        throw std::invalid_argument("configuration assigns " +
                                    entries[i].first.render() + " twice");
      }
      require_same_rank(entries[i].first, entries[0].first);
    }
    Config c;
    c.entries_ = std::move(entries);
    c.rehash();
    return c;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::uint64_t hash() const { return hash_; }

  Label at(Word w) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), w,
        [](const Entry& e, Word x) { return shortlex_less(e.first, x); });
    return (it != entries_.end() && it->first == w) ? it->second : kBasepoint;
  }

  std::vector<Word> support() const {
    std::vector<Word> s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
  }

  /// Largest word length in the support; 0 for 1_p.
  std::size_t radius() const {
    std::size_t r = 0;
    for (const auto& e : entries_) r = std::max(r, e.first.length());
    return r;
  }

  friend bool operator==(const Config& a, const Config& b) {
    return a.hash_ == b.hash_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const Config& a, const Config& b) { return !(a == b); }

 private:
  void rehash() {
    std::uint64_t h = 0x51ed270b27a1c3e5ULL;
    for (const auto& [w, l] : entries_) {
      h = detail::mix64(h ^ w.hash());
      h = detail::mix64(h + l);
    }
    hash_ = h;
  }

  std::vector<Entry> entries_;  // shortlex order by word
  std::uint64_t hash_ = 0x51ed270b27a1c3e5ULL;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const {
    return static_cast<std::size_t>(c.hash());
  }
};

/// (w . f)(x) = f(w^-1 x): the support is left-multiplied by w.
inline Config translate(Word w, const Config& f) {
  if (f.empty()) return f;
  require_same_rank(w, f.entries().front().first);
  if (w.is_identity()) return f;
  std::vector<Config::Entry> moved;
  moved.reserve(f.size());
  for (const auto& [x, l] : f.entries()) moved.emplace_back(multiply(w, x), l);
  return Config::from_entries(std::move(moved));
}

/// Convex hull of a non-empty support: a finite subtree of the Cayley tree.
struct SupportTree {
  std::vector<Word> vertices;     // shortlex order
  std::vector<CayleyEdge> edges;  // positively oriented
};

inline SupportTree convex_hull(const std::vector<Word>& points) {
  if (points.empty()) throw std::invalid_argument("hull of an empty support");
  std::unordered_set<Word> seen;
  const Word root = points.front();
  seen.insert(root);
  for (Word p : points) {
    for (Word v : geodesic(root, p)) seen.insert(v);
  }
  SupportTree t;
  t.vertices.assign(seen.begin(), seen.end());
  std::sort(t.vertices.begin(), t.vertices.end(), ShortlexLess{});
  for (Word v : t.vertices) {
    if (!v.is_identity() && seen.contains(v.prefix())) {
      t.edges.push_back(CayleyEdge::between(v.prefix(), v));
    }
  }
  return t;
}

inline SupportTree support_tree(const Config& f) {
  if (f.empty()) {
    throw std::invalid_argument("the basepoint configuration has no support tree");
  }
  return convex_hull(f.support());
}

struct Barycentre {
  std::variant<Word, CayleyEdge> where;

  bool is_vertex() const { return std::holds_alternative<Word>(where); }
  Word vertex() const { return std::get<Word>(where); }
  const CayleyEdge& edge() const { return std::get<CayleyEdge>(where); }
  /// The vertex itself, or the base of the positively oriented edge.
  Word anchor() const { return is_vertex() ? vertex() : edge().base; }

  friend bool operator==(const Barycentre& a, const Barycentre& b) {
    return a.where == b.where;
  }
};

/// Strips all current leaves simultaneously until one vertex or one edge is
/// left.
inline Barycentre barycentre(const SupportTree& t) {
  if (t.vertices.empty()) throw std::invalid_argument("empty tree");
  std::unordered_map<Word, std::vector<Word>> adj;
  for (Word v : t.vertices) adj[v];
  for (const auto& e : t.edges) {
    adj[e.base].push_back(e.head());
    adj[e.head()].push_back(e.base);
  }
  std::unordered_map<Word, std::size_t> degree;
  std::vector<Word> leaves;
  for (Word v : t.vertices) {
    degree[v] = adj[v].size();
    if (adj[v].size() <= 1) leaves.push_back(v);
  }
  std::size_t remaining = t.vertices.size();
  std::unordered_set<Word> removed;
  while (remaining > 2) {
    std::vector<Word> next;
    for (Word leaf : leaves) {
      removed.insert(leaf);
      --remaining;
    }
    for (Word leaf : leaves) {
      for (Word u : adj[leaf]) {
        if (removed.contains(u)) continue;
        if (--degree[u] == 1) next.push_back(u);
      }
    }
    leaves = std::move(next);
  }
  std::vector<Word> left;
  for (Word v : t.vertices)
    if (!removed.contains(v)) left.push_back(v);
  if (left.size() == 1) return {left.front()};
  return {CayleyEdge::between(left[0], left[1])};
}

/// Barycentre is e or an edge [e, a_i].
inline bool is_admissible(const SupportTree& t) {
  const Barycentre b = barycentre(t);
  return b.anchor().is_identity();
}

/// Barycentre of the support hull computed from a diameter of the support,
/// without building the hull.
inline Barycentre support_barycentre(const Config& f) {
  if (f.empty()) throw std::invalid_argument("empty configuration");
  const auto& entries = f.entries();
  auto farthest = [&](Word from) {
    Word best = from;
    std::size_t best_d = 0;
    for (const auto& [w, l] : entries) {
      const std::size_t d = distance(from, w);
      if (d > best_d) best = w, best_d = d;
    }
    return std::pair{best, best_d};
  };
  const Word x = farthest(entries.front().first).first;
  const auto [y, diameter] = farthest(x);
  const auto path = geodesic(x, y);
  if (diameter % 2 == 0) return {path[diameter / 2]};
  return {CayleyEdge::between(path[diameter / 2], path[diameter / 2 + 1])};
}

struct Canonical {
  Config config;
  Word shift;  // f = shift . config
};

/// The unique admissible representative of the orbit of f.
inline Canonical canonicalize(const Config& f, int rank) {
  if (f.empty()) return {f, Word::identity(rank)};
  const Word w = support_barycentre(f).anchor();
  return {translate(invert(w), f), w};
}

inline Canonical canonicalize(const Config& f) {
  if (f.empty()) throw std::invalid_argument("rank needed for 1_p");
  return canonicalize(f, f.entries().front().first.rank());
}

inline bool is_canonical(const Config& f) {
  return f.empty() || support_barycentre(f).anchor().is_identity();
}

/// Entries sorted by (word length, rendered word).
inline std::string serialize(const Config& f, const LabelSet& labels) {
  if (f.empty()) return "{}";
  std::vector<std::pair<std::string, Label>> items;
  items.reserve(f.size());
  for (const auto& [w, l] : f.entries()) items.emplace_back(w.render(), l);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    // rendered length is monotone in word length only within equal lengths,
    // so compare word length via the letter count
    const auto la = std::count(a.first.begin(), a.first.end(), 'a');
    const auto lb = std::count(b.first.begin(), b.first.end(), 'a');
    if (la != lb) return la < lb;
    return a.first < b.first;
  });
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i].first;
    out += ':';
    out += labels[items[i].second];
  }
  out += '}';
  return out;
}

inline Config parse_config(std::string_view text, const LabelSet& labels,
                           int rank) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw std::invalid_argument("configuration must be enclosed in braces");
  }
  std::string_view body = text.substr(1, text.size() - 2);
  std::vector<Config::Entry> entries;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("configuration entry without ':'");
    }
    const Word w = parse_word(item.substr(0, colon), rank);
    const std::string name(item.substr(colon + 1));
    const auto label = labels.find(name);
    if (!label) throw std::invalid_argument("unknown label '" + name + "'");
    if (*label == kBasepoint) {
      throw std::invalid_argument("basepoint label '" + name +
                                  "' cannot appear in a configuration");
    }
    entries.emplace_back(w, *label);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return Config::from_entries(std::move(entries));
}

/// Total order used in reports: support size, then serialization.
inline bool report_less(const Config& a, const Config& b,
                        const LabelSet& labels) {
  if (a.size() != b.size()) return a.size() < b.size();
  return serialize(a, labels) < serialize(b, labels);
}

inline void sort_for_report(std::vector<Config>& configs,
                            const LabelSet& labels) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i)
    keys.emplace_back(serialize(configs[i], labels), i);
  std::vector<std::size_t> order(configs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (configs[i].size() != configs[j].size())
      return configs[i].size() < configs[j].size();
    return keys[i].first < keys[j].first;
  });
  std::vector<Config> sorted;
  sorted.reserve(configs.size());
  for (std::size_t i : order) sorted.push_back(std::move(configs[i]));
  configs = std::move(sorted);
}

class TruncationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// |labels|^|ball(rank, radius)|, saturating at UINT64_MAX.
inline std::uint64_t config_count(std::size_t label_count, int rank, int radius) {
  const std::uint64_t points = ball_size(rank, radius);
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < points; ++i) {
    if (total > UINT64_MAX / label_count) return UINT64_MAX;
    total *= label_count;
  }
  return total;
}

/// Every configuration with support inside ball(rank, radius).
inline std::vector<Config> enumerate_configs(std::size_t label_count, int rank,
                                             int radius,
                                             std::uint64_t limit = 10'000'000) {
  if (label_count < 2) throw std::invalid_argument("label set too small");
  const std::uint64_t total = config_count(label_count, rank, radius);
  if (total > limit) {
    throw TruncationTooLarge("truncation has " +
                             (total == UINT64_MAX ? std::string("> 2^64")
                                                  : std::to_string(total)) +
                             " configurations (limit " + std::to_string(limit) +
                             ")");
  }
  const auto points = ball(rank, radius);
  std::vector<Label> digits(points.size(), 0);
  std::vector<Config> out;
  out.reserve(total);
  for (std::uint64_t k = 0; k < total; ++k) {
    std::vector<Config::Entry> entries;
    for (std::size_t i = 0; i < points.size(); ++i)
      if (digits[i] != kBasepoint) entries.emplace_back(points[i], digits[i]);
    out.push_back(Config::from_entries(std::move(entries)));
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (++digits[i] < label_count) break;
      digits[i] = 0;
    }
  }
  return out;
}

/// Canonical representatives with support in ball(rank, radius), report
/// order (1_p first).
inline std::vector<Config> enumerate_canonical(const LabelSet& labels, int rank,
                                               int radius,
                                               std::uint64_t limit = 10'000'000) {
  auto all = enumerate_configs(labels.size(), rank, radius, limit);
  std::erase_if(all, [](const Config& c) { return !is_canonical(c); });
  sort_for_report(all, labels);
  return all;
}

/// Partition of the configurations supported in ball(rank, radius) into
/// F_n-orbits, found by union-find over generator moves that keep supports
/// inside ball(rank, inflation).
struct OrbitPartition {
  std::vector<Config> configs;     // the radius-r configurations
  std::vector<std::size_t> klass;  // class id per config, 0..class_count-1
  std::size_t class_count = 0;
  std::size_t explored = 0;        // configurations visited in the big ball
};

inline OrbitPartition orbit_oracle(const LabelSet& labels, int rank, int radius,
                                   std::optional<int> inflation = std::nullopt,
                                   std::uint64_t limit = 10'000'000) {
  const int big = inflation.value_or(2 * radius + 1);
  OrbitPartition out;
  out.configs = enumerate_configs(labels.size(), rank, radius, limit);

  std::unordered_map<Config, std::size_t, ConfigHash> id;
  std::vector<std::size_t> parent;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto intern = [&](const Config& c) {
    auto [it, fresh] = id.emplace(c, parent.size());
    if (fresh) parent.push_back(parent.size());
    return std::pair{it->second, fresh};
  };

  std::vector<Config> stack;
  for (const auto& c : out.configs) {
    if (intern(c).second) stack.push_back(c);
  }
  std::vector<Word> moves;
  for (int i = 1; i <= rank; ++i) {
    moves.push_back(Word::generator(rank, i, 1));
    moves.push_back(Word::generator(rank, i, -1));
  }
  while (!stack.empty()) {
    Config c = std::move(stack.back());
    stack.pop_back();
    const std::size_t cid = id.at(c);
    for (Word g : moves) {
      Config moved = translate(g, c);
      if (moved.radius() > static_cast<std::size_t>(big)) continue;
      auto [mid, fresh] = intern(moved);
      if (fresh) stack.push_back(std::move(moved));
      const std::size_t a = find(cid), b = find(mid);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  out.explored = parent.size();

  std::unordered_map<std::size_t, std::size_t> class_index;
  out.klass.reserve(out.configs.size());
  for (const auto& c : out.configs) {
    const std::size_t root = find(id.at(c));
    auto [it, fresh] = class_index.emplace(root, class_index.size());
    out.klass.push_back(it->second);
  }
  out.class_count = class_index.size();
  return out;
}

}  // namespace wreath
