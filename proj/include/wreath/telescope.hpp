#pragma once

// Finite truncations of the two-dimensional mapping-telescope model for the
// classifying space of proper actions of F wr F_n.
//
// Trees T_w of cosets of B = sum_{F_n} F sit over the Cayley tree; the
// cylinder T_w x [w, w a_j] is glued at its far end into T_{w a_j} by phi.
//
// Cosets are kept in the e-frame: the vertex b B_{m, w} of T_w is stored as
// b' = w . b modulo the subgroup of maps supported in ball(w, m). In this
// frame phi is the projection onto a coarser quotient, theta(f) is left
// multiplication by f, and eta(u) is the translation action of u on B.
//
// Truncation: B is cut down to maps supported in S = ball(n, L). Tree T_w
// carries the levels 1..h_w with h_w = L + 2r + (exponent sum of w), so that
// phi always lands inside the next tree and every tree ends in a single top
// vertex. Every positively oriented Cayley edge with both ends in ball(n, r)
// carries a full cylinder. The result is an iterated mapping cylinder of
// finite trees over a finite tree, hence contractible.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wreath/exact.hpp"
#include "wreath/freegroup.hpp"
#include "wreath/grouprep.hpp"
#include "wreath/intlin.hpp"
#include "wreath/orbits.hpp"

namespace wreath {

class TelescopeTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

class LevelOverflow : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised when the boundary maps do not compose to zero.
class BoundaryError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class CellKind { tree_vertex, tree_edge, vertical_edge, square };

inline const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::tree_vertex: return "tree-vertex";
    case CellKind::tree_edge: return "tree-edge";
    case CellKind::vertical_edge: return "vertical-edge";
    case CellKind::square: return "square";
  }
  return "?";
}

inline CellKind cell_kind_from_string(const std::string& s) {
  for (auto k : {CellKind::tree_vertex, CellKind::tree_edge,
                 CellKind::vertical_edge, CellKind::square})
    if (s == to_string(k)) return k;
  throw std::invalid_argument("unknown cell kind '" + s + "'");
}

inline int cell_dim(CellKind k) {
  switch (k) {
    case CellKind::tree_vertex: return 0;
    case CellKind::tree_edge:
    case CellKind::vertical_edge: return 1;
    case CellKind::square: return 2;
  }
  return -1;
}

/// Coset values over the points of S, in ball order; entries inside the
/// erased ball are the identity (0).
using Coset = std::string;

/// A vertex b B_{m, w} of the tree T_w, coset in the e-frame.
struct TreeVertex {
  Word w;
  int level = 1;
  Coset coset;

  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
};

/// tree-vertex: the vertex itself.
/// tree-edge: the edge from the vertex up to level + 1.
/// vertical-edge: vertex x [w, w a_gen].
/// square: (tree edge at the vertex) x [w, w a_gen].
struct Cell {
  CellKind kind = CellKind::tree_vertex;
  TreeVertex at;
  int gen = 0;  // Cayley generator of the cylinder, 0 for tree cells

  int dim() const { return cell_dim(kind); }
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const {
    std::uint64_t h = detail::mix64(c.at.w.hash() ^ static_cast<std::uint64_t>(c.kind));
    h = detail::mix64(h + static_cast<std::uint64_t>(c.at.level) * 131 +
                      static_cast<std::uint64_t>(c.gen));
    return static_cast<std::size_t>(h ^ std::hash<std::string>{}(c.at.coset));
  }
};

/// Finite 2-dimensional CW complex with integer boundary matrices.
struct CellComplex {
  std::array<std::vector<Cell>, 3> cells;
  IntMatrix d1;  // C_1 -> C_0
  IntMatrix d2;  // C_2 -> C_1

  std::size_t count(int dim) const {
    if (dim == 0) return d1.rows();
    if (dim == 1) return d1.cols();
    return d2.cols();
  }
  long long euler_characteristic() const {
    return static_cast<long long>(count(0)) - static_cast<long long>(count(1)) +
           static_cast<long long>(count(2));
  }
  /// d1 * d2 == 0.
  bool boundary_squares_to_zero() const {
    if (d1.cols() != d2.rows()) return false;
    const IntMatrix p = d1 * d2;
    return p.nnz() == 0;
  }
};

struct HomologyGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool is_z() const { return free_rank == 1 && torsion.empty(); }
  std::string describe() const {
    if (is_zero()) return "0";
    std::string s;
    if (free_rank > 0) s = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
    for (const auto& t : torsion) s += (s.empty() ? "" : " + ") + ("Z/" + t.str());
    return s;
  }
};

/// Cellular homology H_0, H_1, H_2 via Smith normal forms.
inline std::array<HomologyGroup, 3> homology(const CellComplex& c) {
  if (!c.boundary_squares_to_zero()) {
    throw BoundaryError("d1 * d2 != 0: not a chain complex");
  }
  const auto s1 = smith_decompose(c.d1, {false, false});
  const auto s2 = smith_decompose(c.d2, {false, false});
  std::array<HomologyGroup, 3> h;
  h[0] = {c.count(0) - s1.rank(), s1.torsion()};
  h[1] = {c.count(1) - s1.rank() - s2.rank(), s2.torsion()};
  h[2] = {c.count(2) - s2.rank(), {}};
  return h;
}

/// A word in the generators theta(f) and eta(u) of the acting group.
struct Move {
  enum class Kind { theta, eta } kind = Kind::eta;
  Config f;  // theta: element of B, labels are group-table elements
  Word u;    // eta

  static Move theta(Config f) { return {Kind::theta, std::move(f), Word{}}; }
  static Move eta(Word u) { return {Kind::eta, Config{}, u}; }
};

inline constexpr std::uint64_t kDefaultCellLimit = 3'000'000;

class Telescope {
 public:
  Telescope(const FiniteGroupSpec& spec, int rank, int radius, int levels,
            std::uint64_t cell_limit = kDefaultCellLimit)
      : group_(spec.name()), rank_(rank), radius_(radius), levels_(levels) {
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    if (radius < 0) throw std::invalid_argument("radius must be >= 0");
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    if (!spec.table()) {
      throw std::invalid_argument("group " + spec.name() +
                                  " has no multiplication table; the telescope "
                                  "needs the group law of F");
    }
    if (spec.order() > 255) throw std::invalid_argument("group order above 255");
    table_ = *spec.table();
    points_ = ball(rank, levels);
    for (std::size_t i = 0; i < points_.size(); ++i) point_index_.emplace(points_[i], i);
    trees_ = ball(rank, radius);
    for (Word w : trees_) {
      for (int j = 1; j <= rank; ++j) {
        const Word head = w.times(Generator{j, 1});
        if (head.length() <= static_cast<std::size_t>(radius))
          cylinders_.push_back(CayleyEdge{w, j});
      }
    }
    std::sort(cylinders_.begin(), cylinders_.end(),
              [](const CayleyEdge& a, const CayleyEdge& b) {
                if (a.base != b.base) return shortlex_less(a.base, b.base);
                return a.gen < b.gen;
              });
    check_size(cell_limit);
    build();
  }

  const std::string& group() const { return group_; }
  int rank() const { return rank_; }
  int radius() const { return radius_; }
  int levels() const { return levels_; }
  const GroupTable& table() const { return table_; }
  const std::vector<Word>& points() const { return points_; }
  const std::vector<Word>& trees() const { return trees_; }
  const std::vector<CayleyEdge>& cylinders() const { return cylinders_; }
  const CellComplex& complex() const { return complex_; }

  /// Top level h_w of the tree T_w.
  int cap(Word w) const { return levels_ + 2 * radius_ + exponent_sum(w); }

  static int exponent_sum(Word w) {
    int s = 0;
    for (auto g : w.letters()) s += g.sign;
    return s;
  }

  bool has_tree(Word w) const {
    return w.length() <= static_cast<std::size_t>(radius_);
  }
  bool has_cylinder(Word w, int gen) const {
    return gen >= 1 && gen <= rank_ && has_tree(w) &&
           has_tree(w.times(Generator{gen, 1}));
  }

  std::optional<std::size_t> index_of(const Cell& c) const {
    const auto& idx = index_[c.dim()];
    auto it = idx.find(c);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Cell& c) const { return index_of(c).has_value(); }

  /// Coset representative with everything inside ball(w, level) erased.
  Coset erase(Coset c, Word w, int level) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (distance(w, points_[i]) <= static_cast<std::size_t>(level)) c[i] = 0;
    return c;
  }

  /// The vertex b B_{m+1, w} above b B_{m, w}.
  TreeVertex up(const TreeVertex& v) const {
    if (v.level >= cap(v.w)) throw LevelOverflow("top vertex has no parent");
    return {v.w, v.level + 1, erase(v.coset, v.w, v.level + 1)};
  }

  /// phi^{g}_w: T_w -> T_{w g}, the coarser projection in the e-frame.
  TreeVertex phi(const TreeVertex& v, Generator g) const {
    const Word target = v.w.times(g);
    if (!has_tree(target)) {
      throw std::out_of_range("tree T_" + target.render() + " is outside the truncation");
    }
    if (v.level + 1 > cap(target)) {
      throw LevelOverflow("level " + std::to_string(v.level + 1) +
                          " exceeds the top of T_" + target.render());
    }
    return {target, v.level + 1, erase(v.coset, target, v.level + 1)};
  }
  TreeVertex phi(const TreeVertex& v, int j) const {
    return phi(v, Generator{j, 1});
  }

  /// theta(f): left multiplication in the e-frame; absent if f has support
  /// outside S that the coset does not erase.
  std::optional<Cell> theta(const Config& f, const Cell& c) const {
    Cell out = c;
    for (const auto& [x, g] : f.entries()) {
      if (distance(c.at.w, x) <= static_cast<std::size_t>(c.at.level)) continue;
      auto it = point_index_.find(x);
      if (it == point_index_.end()) return std::nullopt;
      auto& slot = out.at.coset[it->second];
      slot = static_cast<char>(table_.mul(static_cast<int>(g), slot));
    }
    return out;
  }

  /// eta(u): translation by u; absent if the image leaves the truncation.
  std::optional<Cell> eta(Word u, const Cell& c) const {
    Cell out = c;
    out.at.w = multiply(u, c.at.w);
    out.at.coset.assign(points_.size(), 0);
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (c.at.coset[i] == 0) continue;
      auto it = point_index_.find(multiply(u, points_[i]));
      if (it == point_index_.end()) return std::nullopt;
      out.at.coset[it->second] = c.at.coset[i];
    }
    if (!contains(out)) return std::nullopt;
    return out;
  }

  /// gamma acts right to left: the last move is applied first.
  std::optional<Cell> act(const std::vector<Move>& gamma, const Cell& c) const {
    std::optional<Cell> x = c;
    for (auto it = gamma.rbegin(); it != gamma.rend() && x; ++it) {
      x = it->kind == Move::Kind::theta ? theta(it->f, *x) : eta(it->u, *x);
    }
    return x;
  }

  /// Signed faces of a cell.
  std::vector<std::pair<Cell, int>> boundary(const Cell& c) const {
    const TreeVertex& v = c.at;
    switch (c.kind) {
      case CellKind::tree_vertex:
        return {};
      case CellKind::tree_edge:
        return {{vertex(up(v)), 1}, {vertex(v), -1}};
      case CellKind::vertical_edge:
        return {{vertex(phi(v, c.gen)), 1}, {vertex(v), -1}};
      case CellKind::square: {
        const TreeVertex u = up(v);
        const TreeVertex pv = phi(v, c.gen);
        return {{Cell{CellKind::tree_edge, v, 0}, 1},
                {Cell{CellKind::vertical_edge, u, c.gen}, 1},
                {Cell{CellKind::tree_edge, pv, 0}, -1},
                {Cell{CellKind::vertical_edge, v, c.gen}, -1}};
      }
    }
    return {};
  }

  /// Number of coset values at level m of T_w: |F|^|S \ ball(w, m)|.
  std::uint64_t level_size(Word w, int m) const {
    std::uint64_t free = 0;
    for (Word p : points_)
      if (distance(w, p) > static_cast<std::size_t>(m)) ++free;
    return saturating_power(static_cast<std::uint64_t>(table_.order()), free);
  }

  /// |S intersect ball(w, m)|: theta-stabilisers of level-m vertices of T_w
  /// have order |F| to this power.
  std::size_t erased_points(Word w, int m) const {
    std::size_t k = 0;
    for (Word p : points_)
      if (distance(w, p) <= static_cast<std::size_t>(m)) ++k;
    return k;
  }

  /// Cells over T_e x [e, a_j), j = 1..n, present in the truncation.
  bool in_fundamental_domain(const Cell& c) const {
    return c.at.w.is_identity() && contains(c);
  }

 private:
  static Cell vertex(const TreeVertex& v) { return {CellKind::tree_vertex, v, 0}; }

  static std::uint64_t saturating_power(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
      if (r > UINT64_MAX / base) return UINT64_MAX;
      r *= base;
    }
    return r;
  }

  static std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
  }

  void check_size(std::uint64_t limit) const {
    std::uint64_t total = 0;
    std::unordered_map<Word, std::uint64_t> tree_cells;
    for (Word w : trees_) {
      std::uint64_t t = 0;
      for (int m = 1; m <= cap(w); ++m) {
        const std::uint64_t k = level_size(w, m);
        t = saturating_add(t, m < cap(w) ? saturating_add(k, k) : k);
      }
      tree_cells[w] = t;
      total = saturating_add(total, t);
    }
    for (const auto& e : cylinders_) total = saturating_add(total, tree_cells[e.base]);
    if (total > limit) {
      throw TelescopeTooLarge(
          "telescope truncation has " +
          (total == UINT64_MAX ? std::string("more than 2^64")
                               : std::to_string(total)) +
          " cells (limit " + std::to_string(limit) + ")");
    }
  }

  // Cosets of level m in T_w: all assignments on the points outside
  // ball(w, m).
  void for_each_coset(Word w, int m, const std::function<void(const Coset&)>& fn) const {
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (distance(w, points_[i]) > static_cast<std::size_t>(m)) free.push_back(i);
    Coset c(points_.size(), 0);
    const int order = table_.order();
    while (true) {
      fn(c);
      std::size_t i = 0;
      for (; i < free.size(); ++i) {
        if (++c[free[i]] < order) break;
        c[free[i]] = 0;
      }
      if (i == free.size()) return;
    }
  }

  void add(const Cell& c) {
    const int d = c.dim();
    index_[d].emplace(c, complex_.cells[d].size());
    complex_.cells[d].push_back(c);
  }

  void build() {
    // trees, then cylinders
    for (Word w : trees_) {
      for (int m = 1; m <= cap(w); ++m) {
        for_each_coset(w, m, [&](const Coset& c) {
          const TreeVertex v{w, m, c};
          add(vertex(v));
          if (m < cap(w)) add({CellKind::tree_edge, v, 0});
        });
      }
    }
    for (const auto& e : cylinders_) {
      for (int m = 1; m <= cap(e.base); ++m) {
        for_each_coset(e.base, m, [&](const Coset& c) {
          const TreeVertex v{e.base, m, c};
          add({CellKind::vertical_edge, v, e.gen});
          if (m < cap(e.base)) add({CellKind::square, v, e.gen});
        });
      }
    }
    complex_.d1 = boundary_matrix(1);
    complex_.d2 = boundary_matrix(2);
  }

  IntMatrix boundary_matrix(int dim) const {
    std::vector<SparseVector> columns;
    columns.reserve(complex_.cells[dim].size());
    for (const Cell& c : complex_.cells[dim]) {
      SparseVector col;
      for (const auto& [face, sign] : boundary(c)) {
        auto at = index_of(face);
        if (!at) {
          throw BoundaryError("inconsistent gluing: face " +
                              std::string(to_string(face.kind)) + " of T_" +
                              face.at.w.render() + " level " +
                              std::to_string(face.at.level) + " is missing");
        }
        col.emplace_back(*at, sign);
      }
      columns.push_back(std::move(col));
    }
    return IntMatrix::from_columns(complex_.cells[dim - 1].size(), std::move(columns));
  }

  std::string group_;
  int rank_, radius_, levels_;
  GroupTable table_;
  std::vector<Word> points_;
  std::unordered_map<Word, std::size_t> point_index_;
  std::vector<Word> trees_;
  std::vector<CayleyEdge> cylinders_;
  CellComplex complex_;
  std::array<std::unordered_map<Cell, std::size_t, CellHash>, 3> index_;
};

/// The tree T = T_e with levels 1..L, B cut down to ball(n, L).
inline Telescope build_tree(const FiniteGroupSpec& spec, int rank, int levels,
                            std::uint64_t cell_limit = kDefaultCellLimit) {
  return Telescope(spec, rank, 0, levels, cell_limit);
}

inline Telescope build_telescope(const FiniteGroupSpec& spec, int rank, int radius,
                                 int levels,
                                 std::uint64_t cell_limit = kDefaultCellLimit) {
  if (levels < 2) throw std::invalid_argument("telescope needs levels >= 2");
  return Telescope(spec, rank, radius, levels, cell_limit);
}

inline TreeVertex glue_map_phi(const Telescope& t, const TreeVertex& v, int j) {
  return t.phi(v, j);
}

// ---- structural checks -----------------------------------------------------

/// Single-coordinate elements {x -> g}, x in S, g != 1: they generate B_S.
inline std::vector<Config> b_generators(const Telescope& t) {
  std::vector<Config> out;
  for (Word x : t.points())
    for (int g = 1; g < t.table().order(); ++g)
      out.push_back(Config::from_entries({{x, static_cast<Label>(g)}}));
  return out;
}

/// Every element of B_S, or nothing if there are more than limit of them.
inline std::optional<std::vector<Config>> b_elements(const Telescope& t,
                                                     std::uint64_t limit) {
  const std::uint64_t order = static_cast<std::uint64_t>(t.table().order());
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < t.points().size(); ++i) {
    if (total > limit / order) return std::nullopt;
    total *= order;
  }
  return enumerate_configs(order, t.rank(), t.levels(), limit);
}

struct CheckResult {
  bool holds = true;
  std::size_t checked = 0;
  std::string counterexample;
};

/// The elements to test B-equivariance with: all of B_S when it has at most
/// `exhaustive_limit` elements, otherwise a generating set (theta is a
/// homomorphism, so generators suffice).
inline std::vector<Config> equivariance_witnesses(const Telescope& t,
                                                  std::uint64_t exhaustive_limit) {
  if (auto all = b_elements(t, exhaustive_limit)) return *all;
  return b_generators(t);
}

inline std::string describe(const Cell& c) {
  std::string s = std::string(to_string(c.kind)) + " T_" + c.at.w.render() +
                  " level " + std::to_string(c.at.level) + " coset [";
  for (char x : c.at.coset) s += std::to_string(static_cast<int>(x));
  s += "]";
  if (c.gen) s += " gen a" + std::to_string(c.gen);
  return s;
}

/// phi^{a_j}_w(f . x) = f . phi^{a_j}_w(x) on every tree vertex below the top
/// of a cylinder.
inline CheckResult check_phi_equivariance(const Telescope& t,
                                          const std::vector<Config>& elements) {
  CheckResult r;
  for (const Cell& c : t.complex().cells[1]) {
    if (c.kind != CellKind::vertical_edge) continue;
    const TreeVertex img = t.phi(c.at, c.gen);
    for (const Config& f : elements) {
      const auto fx = t.theta(f, Cell{CellKind::tree_vertex, c.at, 0});
      const auto fimg = t.theta(f, Cell{CellKind::tree_vertex, img, 0});
      ++r.checked;
      if (!fx || !fimg || t.phi(fx->at, c.gen) != fimg->at) {
        r.holds = false;
        r.counterexample = describe(c);
        return r;
      }
    }
  }
  return r;
}

/// eta(a_j) theta(f) eta(a_j)^-1 = theta(a_j . f) on every cell where the left
/// side is defined.
inline CheckResult check_conjugation(const Telescope& t,
                                     const std::vector<Config>& elements) {
  CheckResult r;
  for (int j = 1; j <= t.rank(); ++j) {
    const Word a = Word::generator(t.rank(), j);
    for (const Config& f : elements) {
      const Config af = translate(a, f);
      const std::vector<Move> lhs{Move::eta(a), Move::theta(f), Move::eta(invert(a))};
      for (int d = 0; d < 3; ++d) {
        for (const Cell& c : t.complex().cells[d]) {
          const auto left = t.act(lhs, c);
          if (!left) continue;
          const auto right = t.theta(af, c);
          ++r.checked;
          if (!right || *left != *right) {
            r.holds = false;
            r.counterexample = describe(c) + " with a" + std::to_string(j);
            return r;
          }
        }
      }
    }
  }
  return r;
}

/// d(g . c) = g . d(c) for the generators eta(a_j^{+-1}) and theta of the
/// given elements, wherever g . c is defined.
inline CheckResult check_action_commutes_with_boundary(
    const Telescope& t, const std::vector<Config>& elements) {
  CheckResult r;
  std::vector<Move> moves;
  for (int j = 1; j <= t.rank(); ++j) {
    moves.push_back(Move::eta(Word::generator(t.rank(), j, 1)));
    moves.push_back(Move::eta(Word::generator(t.rank(), j, -1)));
  }
  for (const Config& f : elements) moves.push_back(Move::theta(f));
  for (const Move& g : moves) {
    for (int d = 1; d < 3; ++d) {
      for (const Cell& c : t.complex().cells[d]) {
        const auto image = t.act({g}, c);
        if (!image || !t.contains(*image)) continue;
        auto expect = t.boundary(*image);
        std::vector<std::pair<Cell, int>> got;
        for (const auto& [face, sign] : t.boundary(c)) {
          const auto moved = t.act({g}, face);
          if (!moved) {
            r.holds = false;
            r.counterexample = "face of " + describe(c) + " leaves the truncation";
            return r;
          }
          got.emplace_back(*moved, sign);
        }
        ++r.checked;
        auto key = [&](const std::pair<Cell, int>& p) {
          return std::pair{*t.index_of(p.first), p.second};
        };
        std::vector<std::pair<std::size_t, int>> a, b;
        for (const auto& p : expect) a.push_back(key(p));
        for (const auto& p : got) b.push_back(key(p));
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) {
          r.holds = false;
          r.counterexample = describe(c);
          return r;
        }
      }
    }
  }
  return r;
}

/// eta(u) c = c with u != e never happens for u in ball(n, 2r).
inline CheckResult check_eta_free(const Telescope& t) {
  CheckResult r;
  const auto moves = ball(t.rank(), 2 * t.radius());
  for (int d = 0; d < 3; ++d) {
    for (const Cell& c : t.complex().cells[d]) {
      for (Word u : moves) {
        if (u.is_identity()) continue;
        const auto image = t.eta(u, c);
        ++r.checked;
        if (image && *image == c) {
          r.holds = false;
          r.counterexample = describe(c) + " fixed by " + u.render();
          return r;
        }
      }
    }
  }
  return r;
}

/// Cells of the fundamental domain D = union_j T_e x [e, a_j) and how the
/// rest of the truncation meets it.
struct DomainCensus {
  std::array<std::size_t, 4> domain_by_kind{};  // indexed by CellKind
  std::size_t domain_cells = 0;
  std::size_t interior_cells = 0;  // cells whose eta-translate into D exists
  std::size_t frontier_cells = 0;  // cells whose translate leaves the truncation
  std::size_t orbits_met = 0;      // distinct D-cells hit by interior cells
  bool meets_once = true;          // every interior orbit meets D in one cell
  bool translates_disjoint = true; // u D and D share no cell for u != e
  std::string counterexample;
};

inline DomainCensus fundamental_domain_cells(const Telescope& t) {
  if (t.radius() < 1) {
    throw std::invalid_argument("the fundamental domain needs radius >= 1");
  }
  DomainCensus census;
  std::vector<std::vector<bool>> hit(3);
  for (int d = 0; d < 3; ++d) {
    hit[d].assign(t.complex().cells[d].size(), false);
    for (const Cell& c : t.complex().cells[d]) {
      if (t.in_fundamental_domain(c)) {
        ++census.domain_by_kind[static_cast<int>(c.kind)];
        ++census.domain_cells;
      }
    }
  }
  for (int d = 0; d < 3; ++d) {
    for (const Cell& c : t.complex().cells[d]) {
      const auto rep = t.eta(invert(c.at.w), c);
      if (!rep) {
        ++census.frontier_cells;
        continue;
      }
      ++census.interior_cells;
      if (!t.in_fundamental_domain(*rep)) {
        census.meets_once = false;
        census.counterexample = describe(c) + " has no representative in D";
        continue;
      }
      const std::size_t i = *t.index_of(*rep);
      if (!hit[d][i]) {
        hit[d][i] = true;
        ++census.orbits_met;
      }
    }
  }
  // freeness on D: a second meeting point would be a translate u D with u != e
  const auto moves = ball(t.rank(), 2 * t.radius());
  for (int d = 0; d < 3; ++d) {
    for (const Cell& c : t.complex().cells[d]) {
      if (!t.in_fundamental_domain(c)) continue;
      for (Word u : moves) {
        if (u.is_identity()) continue;
        const auto image = t.eta(u, c);
        if (image && t.in_fundamental_domain(*image)) {
          census.translates_disjoint = false;
          census.meets_once = false;
          census.counterexample = describe(c) + " meets " + u.render() + " D";
        }
      }
    }
  }
  return census;
}

/// Order of the theta-stabiliser of a vertex inside B_S, by enumeration.
inline std::uint64_t stabilizer_order(const Telescope& t, const TreeVertex& v,
                                      std::uint64_t limit = 1'000'000) {
  const auto all = b_elements(t, limit);
  if (!all) throw TelescopeTooLarge("B_S too large to enumerate");
  const Cell c{CellKind::tree_vertex, v, 0};
  std::uint64_t count = 0;
  for (const Config& f : *all) {
    const auto image = t.theta(f, c);
    if (image && *image == c) ++count;
  }
  return count;
}

// ---- export ------------------------------------------------------------------

/// Coset as its non-identity entries, "{word:element,...}".
inline std::string render_coset(const Telescope& t, const Coset& c) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (!first) s += ',';
    first = false;
    s += t.points()[i].render() + ":" + std::to_string(static_cast<int>(c[i]));
  }
  return s + "}";
}

/// Cells with stable ids (0-cells, then 1-cells, then 2-cells) and signed
/// boundary incidences.
inline nlohmann::ordered_json export_complex(const Telescope& t) {
  nlohmann::ordered_json j;
  j["group"] = t.group();
  j["n"] = t.rank();
  j["radius"] = t.radius();
  j["levels"] = t.levels();
  const auto& cx = t.complex();
  const std::array<std::size_t, 3> offset{0, cx.count(0), cx.count(0) + cx.count(1)};
  auto cells = nlohmann::ordered_json::array();
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < cx.cells[d].size(); ++i) {
      const Cell& c = cx.cells[d][i];
      nlohmann::ordered_json e;
      e["id"] = offset[d] + i;
      e["dim"] = d;
      e["kind"] = to_string(c.kind);
      e["tree"] = c.at.w.render();
      e["level"] = c.at.level;
      e["coset"] = render_coset(t, c.at.coset);
      if (c.gen) e["gen"] = c.gen;
      auto faces = nlohmann::ordered_json::array();
      if (d > 0) {
        const IntMatrix& m = d == 1 ? cx.d1 : cx.d2;
        for (const auto& [r, v] : m.column(i))
          faces.push_back({offset[d - 1] + r, v.convert_to<long long>()});
      }
      e["boundary"] = std::move(faces);
      cells.push_back(std::move(e));
    }
  }
  j["cells"] = std::move(cells);
  return j;
}

/// A complex read back from an export: descriptors and boundary matrices.
struct ImportedComplex {
  std::string group;
  int rank = 0, radius = 0, levels = 0;
  struct Entry {
    std::size_t id;
    int dim;
    CellKind kind;
    std::string tree;
    int level;
    std::string coset;
    int gen;
  };
  std::vector<Entry> cells;
  CellComplex complex;  // cell descriptors left empty; matrices filled
};

inline ImportedComplex import_complex(const nlohmann::json& j) {
  ImportedComplex out;
  out.group = j.at("group").get<std::string>();
  out.rank = j.at("n").get<int>();
  out.radius = j.at("radius").get<int>();
  out.levels = j.at("levels").get<int>();
  std::array<std::size_t, 3> count{};
  for (const auto& e : j.at("cells")) {
    ImportedComplex::Entry c{e.at("id").get<std::size_t>(),
                             e.at("dim").get<int>(),
                             cell_kind_from_string(e.at("kind").get<std::string>()),
                             e.at("tree").get<std::string>(),
                             e.at("level").get<int>(),
                             e.at("coset").get<std::string>(),
                             e.contains("gen") ? e.at("gen").get<int>() : 0};
    if (c.dim < 0 || c.dim > 2 || cell_dim(c.kind) != c.dim) {
      throw std::invalid_argument("cell " + std::to_string(c.id) + " has a bad dimension");
    }
    if (c.id != out.cells.size()) {
      throw std::invalid_argument("cell ids must be consecutive from 0");
    }
    parse_word(c.tree, out.rank);  // validates the tree word
    ++count[c.dim];
    out.cells.push_back(std::move(c));
  }
  const std::array<std::size_t, 3> offset{0, count[0], count[0] + count[1]};
  std::array<std::vector<SparseVector>, 3> columns;
  std::size_t k = 0;
  for (const auto& e : j.at("cells")) {
    const auto& c = out.cells[k++];
    if (c.id < offset[c.dim] || (c.dim < 2 && c.id >= offset[c.dim + 1])) {
      throw std::invalid_argument("cells must be listed by dimension");
    }
    SparseVector col;
    for (const auto& f : e.at("boundary")) {
      const std::size_t face = f.at(0).get<std::size_t>();
      if (c.dim == 0 || face < offset[c.dim - 1] || face >= offset[c.dim]) {
        throw std::invalid_argument("boundary of cell " + std::to_string(c.id) +
                                    " refers to a cell of the wrong dimension");
      }
      col.emplace_back(face - offset[c.dim - 1], f.at(1).get<long long>());
    }
    columns[c.dim].push_back(std::move(col));
  }
  out.complex.d1 = IntMatrix::from_columns(count[0], std::move(columns[1]));
  out.complex.d2 = IntMatrix::from_columns(count[1], std::move(columns[2]));
  return out;
}

}  // namespace wreath
