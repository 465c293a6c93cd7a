#pragma once

// Exact integer linear algebra over arbitrary-precision integers.
//
// Everything here funnels through one Smith normal form elimination with
// optional tracking of the unimodular transforms:  U * A * V = D.  Kernels
// are read off V, cokernels off D, and image membership from both.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wreath/exact.hpp"

namespace wreath {

using IntVector = std::vector<Integer>;

/// Sorted (index, value) pairs with no stored zeros.
using SparseVector = std::vector<std::pair<std::size_t, Integer>>;

/// y + q * x for sorted sparse vectors.
inline SparseVector sparse_axpy(const SparseVector& y, const Integer& q,
                                const SparseVector& x) {
  if (q == 0) return y;
  SparseVector out;
  out.reserve(y.size() + x.size());
  auto i = y.begin();
  auto j = x.begin();
  while (i != y.end() || j != x.end()) {
    if (j == x.end() || (i != y.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == y.end() || j->first < i->first) {
      out.emplace_back(j->first, q * j->second);
      ++j;
    } else {
      Integer v = i->second + q * j->second;
      if (v != 0) out.emplace_back(i->first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

/// a * x + b * y.
inline SparseVector sparse_combine(const Integer& a, const SparseVector& x,
                                   const Integer& b, const SparseVector& y) {
  SparseVector scaled;
  if (a != 0) {
    scaled.reserve(x.size());
    for (const auto& [i, v] : x) scaled.emplace_back(i, a * v);
  }
  return b == 0 ? scaled : sparse_axpy(scaled, b, y);
}

inline const Integer* sparse_find(const SparseVector& v, std::size_t index) {
  auto it = std::lower_bound(
      v.begin(), v.end(), index,
      [](const auto& entry, std::size_t i) { return entry.first < i; });
  return (it != v.end() && it->first == index) ? &it->second : nullptr;
}

/// Sparse integer matrix, stored by columns.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.columns_[i].emplace_back(i, 1);
    return m;
  }

  /// Row-major dense input.
  static IntMatrix from_dense(const std::vector<std::vector<Integer>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix");
      for (std::size_t c = 0; c < cols; ++c)
        if (rows[r][c] != 0) m.columns_[c].emplace_back(r, rows[r][c]);
    }
    return m;
  }

  static IntMatrix from_columns(std::size_t rows,
                                std::vector<SparseVector> columns) {
    IntMatrix m(rows, columns.size());
    for (auto& col : columns) {
      std::sort(col.begin(), col.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      SparseVector clean;
      for (auto& [r, v] : col) {
        if (r >= rows) throw std::out_of_range("matrix row index out of range");
        if (!clean.empty() && clean.back().first == r) {
          clean.back().second += v;
          if (clean.back().second == 0) clean.pop_back();
        } else if (v != 0) {
          clean.emplace_back(r, std::move(v));
        }
      }
      col = std::move(clean);
    }
    m.columns_ = std::move(columns);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
  }

  const SparseVector& column(std::size_t c) const { return columns_.at(c); }

  Integer at(std::size_t r, std::size_t c) const {
    check(r, c);
    const Integer* v = sparse_find(columns_[c], r);
    return v ? *v : Integer(0);
  }

  void add(std::size_t r, std::size_t c, const Integer& value) {
    check(r, c);
    columns_[c] = sparse_axpy(columns_[c], value, SparseVector{{r, 1}});
  }

  void set(std::size_t r, std::size_t c, const Integer& value) {
    add(r, c, value - at(r, c));
  }

  IntVector apply(const IntVector& x) const {
    if (x.size() != cols()) throw std::invalid_argument("dimension mismatch");
    IntVector y(rows_);
    for (std::size_t c = 0; c < cols(); ++c) {
      if (x[c] == 0) continue;
      for (const auto& [r, v] : columns_[c]) y[r] += v * x[c];
    }
    return y;
  }

  IntMatrix transposed() const {
    std::vector<SparseVector> cols_t(rows_);
    for (std::size_t c = 0; c < cols(); ++c)
      for (const auto& [r, v] : columns_[c]) cols_t[r].emplace_back(c, v);
    IntMatrix t(cols(), rows_);
    t.columns_ = std::move(cols_t);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch");
    IntMatrix out(a.rows(), b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
      SparseVector acc;
      for (const auto& [k, v] : b.columns_[c])
        acc = sparse_axpy(acc, v, a.columns_[k]);
      out.columns_[c] = std::move(acc);
    }
    return out;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.columns_ == b.columns_;
  }

  std::vector<std::vector<Integer>> to_dense() const {
    std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols()));
    for (std::size_t c = 0; c < cols(); ++c)
      for (const auto& [r, v] : columns_[c]) d[r][c] = v;
    return d;
  }

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols()) {
      throw std::out_of_range("matrix index out of range");
    }
  }

  std::size_t rows_ = 0;
  std::vector<SparseVector> columns_;
};

/// g = s*a + t*b with g = gcd(a, b) >= 0.
struct ExtendedGcd {
  Integer g, s, t;
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - q * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

enum class SmithEngine { automatic, dense, sparse };

struct SmithOptions {
  bool track_left = true;   // U
  bool track_right = true;  // V
  SmithEngine engine = SmithEngine::automatic;
};

/// D(row, col) = value in U * A * V = D.
struct SmithPivot {
  std::size_t row;
  std::size_t col;
  Integer value;
};

/// Result of an elimination: pivots in divisibility-chain order, and, when
/// tracked, U by rows and V by columns in the original row/column indexing.
struct SmithDecomposition {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<SmithPivot> pivots;
  std::optional<std::vector<SparseVector>> left;
  std::optional<std::vector<SparseVector>> right;

  std::size_t rank() const { return pivots.size(); }

  /// Columns of V outside the pivot columns: a Z-basis of ker A.
  std::vector<IntVector> kernel_basis() const {
    if (!right) throw std::logic_error("kernel needs the right transform");
    std::vector<bool> pivot_col(cols, false);
    for (const auto& p : pivots) pivot_col[p.col] = true;
    std::vector<IntVector> basis;
    for (std::size_t c = 0; c < cols; ++c) {
      if (pivot_col[c]) continue;
      IntVector v(cols);
      for (const auto& [i, x] : (*right)[c]) v[i] = x;
      basis.push_back(std::move(v));
    }
    return basis;
  }

  /// Some x with A x = b, if one exists over Z.
  std::optional<IntVector> solve(const IntVector& b) const {
    if (!left || !right) throw std::logic_error("solve needs U and V");
    if (b.size() != rows) throw std::invalid_argument("rhs length mismatch");
    // c = U b
    IntVector c(rows);
    for (std::size_t r = 0; r < rows; ++r)
      for (const auto& [k, u] : (*left)[r])
        if (b[k] != 0) c[r] += u * b[k];
    std::vector<bool> pivot_row(rows, false);
    IntVector x(cols);
    for (const auto& p : pivots) {
      pivot_row[p.row] = true;
      if (c[p.row] % p.value != 0) return std::nullopt;
      const Integer y = c[p.row] / p.value;
      if (y == 0) continue;
      for (const auto& [i, v] : (*right)[p.col]) x[i] += v * y;
    }
    for (std::size_t r = 0; r < rows; ++r)
      if (!pivot_row[r] && c[r] != 0) return std::nullopt;
    return x;
  }

  std::vector<Integer> torsion() const {
    std::vector<Integer> t;
    for (const auto& p : pivots)
      if (p.value > 1) t.push_back(p.value);
    return t;
  }
};

namespace detail {

inline std::vector<SparseVector> identity_vectors(std::size_t n) {
  std::vector<SparseVector> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i].emplace_back(i, 1);
  return v;
}

// Markowitz-style sparse elimination: pivot on the active row of fewest
// entries, choosing its smallest entry with the shortest column.
class SparseSmith {
 public:
  SparseSmith(const IntMatrix& a, const SmithOptions& opt)
      : rows_(a.rows()), cols_(a.cols()), row_(a.rows()), col_rows_(a.cols()) {
    for (std::size_t c = 0; c < cols_; ++c)
      for (const auto& [r, v] : a.column(c)) {
        row_[r].emplace_back(c, v);
        col_rows_[c].push_back(r);
      }
    if (opt.track_left) left_ = identity_vectors(rows_);
    if (opt.track_right) right_ = identity_vectors(cols_);
  }

  SmithDecomposition run() {
    for (std::size_t r = 0; r < rows_; ++r)
      if (!row_[r].empty()) queue_.emplace(row_[r].size(), r);
    while (!queue_.empty()) {
      auto [count, r] = queue_.top();
      queue_.pop();
      if (row_[r].size() != count || count == 0) continue;
      eliminate(r);
    }
    SmithDecomposition out;
    out.rows = rows_;
    out.cols = cols_;
    out.pivots = std::move(pivots_);
    out.left = std::move(left_);
    out.right = std::move(right_);
    return out;
  }

 private:
  using QueueEntry = std::pair<std::size_t, std::size_t>;

  // Euclidean elimination around (r, c): remainders never exceed the pivot,
  // and whenever one survives it becomes the new, strictly smaller pivot.
  void eliminate(std::size_t r) {
    const std::size_t first = r;
    std::size_t c = choose_column(r);
    while (true) {
      r = clear_column(r, c);
      const auto next = clear_row(r, c);
      if (!next) break;
      c = *next;
    }
    Integer p = *sparse_find(row_[r], c);
    pivots_.push_back({r, c, std::move(p)});
    row_[r].clear();
    col_rows_[c].clear();
    if (first != r && !row_[first].empty())
      queue_.emplace(row_[first].size(), first);
  }

  std::size_t choose_column(std::size_t r) const {
    const auto& row = row_[r];
    std::size_t best = row.front().first;
    Integer best_abs = abs(row.front().second);
    for (const auto& [c, v] : row) {
      const Integer m = abs(v);
      if (m < best_abs ||
          (m == best_abs && col_rows_[c].size() < col_rows_[best].size())) {
        best = c;
        best_abs = m;
      }
    }
    return best;
  }

  // Row operations until column c is zero off the pivot row; returns the
  // final pivot row.
  std::size_t clear_column(std::size_t r, std::size_t c) {
    while (true) {
      const Integer p = *sparse_find(row_[r], c);
      std::optional<std::size_t> smallest;
      Integer smallest_abs;
      const std::vector<std::size_t> others = col_rows_[c];
      for (std::size_t k : others) {
        if (k == r) continue;
        const Integer* pk = sparse_find(row_[k], c);
        if (pk == nullptr) continue;
        const Integer q = -(*pk / p);
        if (q != 0) {
          replace_row(k, sparse_axpy(row_[k], q, row_[r]));
          if (left_) (*left_)[k] = sparse_axpy((*left_)[k], q, (*left_)[r]);
        }
        if (const Integer* rem = sparse_find(row_[k], c)) {
          if (!smallest || abs(*rem) < smallest_abs) {
            smallest = k;
            smallest_abs = abs(*rem);
          }
        }
      }
      if (!smallest) return r;
      r = *smallest;
    }
  }

  // Column operations on row r. Column c holds only the pivot, so they touch
  // no other row. Returns the column of the smallest remainder, if any.
  std::optional<std::size_t> clear_row(std::size_t r, std::size_t c) {
    const Integer p = *sparse_find(row_[r], c);
    SparseVector kept{{c, p}};
    std::optional<std::size_t> smallest;
    Integer smallest_abs;
    for (const auto& [j, a] : row_[r]) {
      if (j == c) continue;
      const Integer q = -(a / p);
      if (q != 0 && right_) {
        auto& v = *right_;
        v[j] = sparse_axpy(v[j], q, v[c]);
      }
      Integer rem = a + q * p;
      if (rem == 0) {
        erase_from_column(j, r);
        continue;
      }
      if (!smallest || abs(rem) < smallest_abs) {
        smallest = j;
        smallest_abs = abs(rem);
      }
      kept.emplace_back(j, std::move(rem));
    }
    std::sort(kept.begin(), kept.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    row_[r] = std::move(kept);
    return smallest;
  }

  void replace_row(std::size_t k, SparseVector fresh) {
    const SparseVector& old = row_[k];
    auto i = old.begin();
    auto j = fresh.begin();
    while (i != old.end() || j != fresh.end()) {
      if (j == fresh.end() || (i != old.end() && i->first < j->first)) {
        erase_from_column(i->first, k);
        ++i;
      } else if (i == old.end() || j->first < i->first) {
        col_rows_[j->first].push_back(k);
        ++j;
      } else {
        ++i;
        ++j;
      }
    }
    const bool changed = fresh.size() != row_[k].size();
    row_[k] = std::move(fresh);
    if (changed && !row_[k].empty()) queue_.emplace(row_[k].size(), k);
  }

  void erase_from_column(std::size_t c, std::size_t k) {
    auto& v = col_rows_[c];
    auto it = std::find(v.begin(), v.end(), k);
    if (it != v.end()) {
      *it = v.back();
      v.pop_back();
    }
  }

  std::size_t rows_, cols_;
  std::vector<SparseVector> row_;
  std::vector<std::vector<std::size_t>> col_rows_;
  std::optional<std::vector<SparseVector>> left_;
  std::optional<std::vector<SparseVector>> right_;
  std::vector<SmithPivot> pivots_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>
      queue_;
};

// Textbook dense Smith normal form; used for small blocks and as a
// cross-check of the sparse engine.
inline SmithDecomposition dense_smith(const IntMatrix& a,
                                      const SmithOptions& opt) {
  const std::size_t m = a.rows(), n = a.cols();
  auto d = a.to_dense();
  std::vector<std::vector<Integer>> u, v;
  if (opt.track_left) {
    u.assign(m, std::vector<Integer>(m));
    for (std::size_t i = 0; i < m; ++i) u[i][i] = 1;
  }
  if (opt.track_right) {
    v.assign(n, std::vector<Integer>(n));  // v[col][row]: stored by column
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;
  }
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(d[i], d[j]);
    if (opt.track_left) std::swap(u[i], u[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : d) std::swap(row[i], row[j]);
    if (opt.track_right) std::swap(v[i], v[j]);
  };
  auto row_axpy = [&](std::size_t dst, const Integer& q, std::size_t src) {
    for (std::size_t c = 0; c < n; ++c) d[dst][c] += q * d[src][c];
    if (opt.track_left)
      for (std::size_t c = 0; c < m; ++c) u[dst][c] += q * u[src][c];
  };
  auto col_axpy = [&](std::size_t dst, const Integer& q, std::size_t src) {
    for (std::size_t r = 0; r < m; ++r) d[r][dst] += q * d[r][src];
    if (opt.track_right)
      for (std::size_t r = 0; r < n; ++r) v[dst][r] += q * v[src][r];
  };

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    // smallest nonzero entry of the trailing block
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (d[i][j] != 0 &&
            (!best || abs(d[i][j]) < abs(d[best->first][best->second])))
          best = {i, j};
    if (!best) break;
    swap_rows(t, best->first);
    swap_cols(t, best->second);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d[i][t] == 0) continue;
        row_axpy(i, -(d[i][t] / d[t][t]), t);
        if (d[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d[t][j] == 0) continue;
        col_axpy(j, -(d[t][j] / d[t][t]), t);
        if (d[t][j] != 0) clean = false;
      }
      if (!clean) {
        // move the smallest remainder in row/column t to the pivot
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (d[i][t] != 0 && abs(d[i][t]) < abs(d[bi][bj])) bi = i, bj = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (d[t][j] != 0 && abs(d[t][j]) < abs(d[bi][bj])) bi = t, bj = j;
        swap_rows(t, bi);
        swap_cols(t, bj);
        continue;
      }
      std::optional<std::size_t> bad_row;
      for (std::size_t i = t + 1; i < m && !bad_row; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d[i][j] % d[t][t] != 0) {
            bad_row = i;
            break;
          }
      if (!bad_row) break;
      row_axpy(t, 1, *bad_row);
    }
    if (d[t][t] < 0) {
      for (std::size_t c = 0; c < n; ++c) d[t][c] = -d[t][c];
      if (opt.track_left)
        for (std::size_t c = 0; c < m; ++c) u[t][c] = -u[t][c];
    }
  }

  SmithDecomposition out;
  out.rows = m;
  out.cols = n;
  for (std::size_t i = 0; i < t; ++i) out.pivots.push_back({i, i, d[i][i]});
  auto sparsify = [](const std::vector<std::vector<Integer>>& rows) {
    std::vector<SparseVector> s(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        if (rows[i][j] != 0) s[i].emplace_back(j, rows[i][j]);
    return s;
  };
  if (opt.track_left) out.left = sparsify(u);
  if (opt.track_right) out.right = sparsify(v);
  return out;
}

// Positive pivots arranged into a divisibility chain d1 | d2 | ...
inline void normalize_chain(SmithDecomposition& dec) {
  auto& piv = dec.pivots;
  for (auto& p : piv) {
    if (p.value < 0) {
      p.value = -p.value;
      if (dec.left)
        for (auto& [i, x] : (*dec.left)[p.row]) x = -x;
    }
  }
  std::stable_sort(piv.begin(), piv.end(),
                   [](const auto& a, const auto& b) { return a.value < b.value; });
  // units already divide everything
  const auto units = std::partition_point(
      piv.begin(), piv.end(), [](const auto& p) { return p.value == 1; });
  for (auto i = static_cast<std::size_t>(units - piv.begin()); i < piv.size(); ++i) {
    for (std::size_t j = i + 1; j < piv.size(); ++j) {
      const Integer a = piv[i].value, b = piv[j].value;
      if (b % a == 0) continue;
      const auto [g, s, t] = extended_gcd(a, b);
      const Integer l = a / g * b;
      if (dec.left) {
        auto& u = *dec.left;
        const std::size_t ri = piv[i].row, rj = piv[j].row;
        SparseVector ui = sparse_combine(s, u[ri], t, u[rj]);
        u[rj] = sparse_combine(-(b / g), u[ri], a / g, u[rj]);
        u[ri] = std::move(ui);
      }
      if (dec.right) {
        auto& v = *dec.right;
        const std::size_t ci = piv[i].col, cj = piv[j].col;
        SparseVector vi = sparse_combine(1, v[ci], 1, v[cj]);
        v[cj] = sparse_combine(-(t * b / g), v[ci], s * a / g, v[cj]);
        v[ci] = std::move(vi);
      }
      piv[i].value = g;
      piv[j].value = l;
    }
  }
}

}  // namespace detail

inline SmithDecomposition smith_decompose(const IntMatrix& a,
                                          const SmithOptions& opt = {}) {
  const bool dense = opt.engine == SmithEngine::dense ||
                     (opt.engine == SmithEngine::automatic && a.cols() < 64 &&
                      a.rows() < 64);
  SmithDecomposition dec =
      dense ? detail::dense_smith(a, opt) : detail::SparseSmith(a, opt).run();
  detail::normalize_chain(dec);
  return dec;
}

/// U * A * V = diag(d_1, ..., d_k, 0, ...), d_1 | d_2 | ... | d_k.
struct SmithForm {
  IntMatrix U;
  IntMatrix V;
  std::vector<Integer> diag;  // length min(rows, cols), zeros at the end
};

inline SmithForm smith(const IntMatrix& a, SmithEngine engine =
                                               SmithEngine::automatic) {
  SmithDecomposition dec = smith_decompose(a, {true, true, engine});
  std::vector<std::size_t> row_order, col_order;
  std::vector<bool> used_r(a.rows(), false), used_c(a.cols(), false);
  SmithForm out;
  for (const auto& p : dec.pivots) {
    row_order.push_back(p.row);
    col_order.push_back(p.col);
    used_r[p.row] = used_c[p.col] = true;
    out.diag.push_back(p.value);
  }
  for (std::size_t r = 0; r < a.rows(); ++r)
    if (!used_r[r]) row_order.push_back(r);
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!used_c[c]) col_order.push_back(c);
  out.diag.resize(std::min(a.rows(), a.cols()), 0);

  // U rows reordered; transposing twice keeps the column storage.
  std::vector<SparseVector> u_rows;
  for (std::size_t r : row_order) u_rows.push_back((*dec.left)[r]);
  out.U = IntMatrix::from_columns(a.rows(), std::move(u_rows)).transposed();
  std::vector<SparseVector> v_cols;
  for (std::size_t c : col_order) v_cols.push_back((*dec.right)[c]);
  out.V = IntMatrix::from_columns(a.cols(), std::move(v_cols));
  return out;
}

/// A Z-basis of {x : A x = 0}; each vector primitive.
inline std::vector<IntVector> kernel_basis(const IntMatrix& a) {
  auto basis = smith_decompose(a, {false, true}).kernel_basis();
  for (auto& v : basis) {
    // sign convention: first nonzero entry positive
    auto it = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
    if (it != v.end() && *it < 0)
      for (auto& x : v) x = -x;
  }
  return basis;
}

struct CokernelInvariants {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1
};

/// coker(A) = Z^free_rank + sum Z/t_i.
inline CokernelInvariants cokernel_invariants(const IntMatrix& a) {
  const auto dec = smith_decompose(a, {false, false});
  return {a.rows() - dec.rank(), dec.torsion()};
}

inline std::size_t integer_rank(const IntMatrix& a) {
  return smith_decompose(a, {false, false}).rank();
}

/// Factor once, then test many right-hand sides for membership in Im A.
class ImageSolver {
 public:
  explicit ImageSolver(const IntMatrix& a)
      : dec_(smith_decompose(a, {true, true})) {}
  std::optional<IntVector> solve(const IntVector& b) const {
    return dec_.solve(b);
  }
  const SmithDecomposition& decomposition() const { return dec_; }

 private:
  SmithDecomposition dec_;
};

inline std::optional<IntVector> solve_in_image(const IntMatrix& a,
                                               const IntVector& b) {
  return ImageSolver(a).solve(b);
}

/// Coordinate exchange format: header "rows cols nnz", then one 1-based
/// "row col value" triple per line, column-major.
inline void write_matrix(std::ostream& os, const IntMatrix& a) {
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (std::size_t c = 0; c < a.cols(); ++c)
    for (const auto& [r, v] : a.column(c))
      os << r + 1 << ' ' << c + 1 << ' ' << v << '\n';
}

inline IntMatrix read_matrix(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] != '%') return true;
    }
    return false;
  };
  if (!next_line()) throw std::invalid_argument("missing matrix header");
  std::size_t rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> rows >> cols >> nnz)) {
      throw std::invalid_argument("bad matrix header '" + line + "'");
    }
  }
  std::vector<SparseVector> columns(cols);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_line()) throw std::invalid_argument("truncated matrix body");
    std::istringstream ls(line);
    std::size_t r = 0, c = 0;
    std::string value;
    if (!(ls >> r >> c >> value) || r == 0 || c == 0 || r > rows || c > cols) {
      throw std::invalid_argument("bad matrix entry '" + line + "'");
    }
    columns[c - 1].emplace_back(r - 1, Integer(value));
  }
  return IntMatrix::from_columns(rows, std::move(columns));
}

}  // namespace wreath
