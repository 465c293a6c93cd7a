#include <gtest/gtest.h>

#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "wreath/intlin.hpp"

using namespace wreath;

namespace {

IntMatrix dense(std::vector<std::vector<long>> rows) {
  std::vector<std::vector<Integer>> big;
  for (auto& r : rows) big.emplace_back(r.begin(), r.end());
  return IntMatrix::from_dense(big);
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n,
                        int range, double density) {
  std::uniform_int_distribution<int> val(-range, range);
  std::bernoulli_distribution keep(density);
  IntMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (keep(rng)) a.set(i, j, val(rng));
  return a;
}

// Determinant by fraction-free Bareiss elimination; independent of the SNF.
Integer det(std::vector<std::vector<Integer>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// gcd of all k x k minors, by enumeration.
Integer minor_gcd(const std::vector<std::vector<Integer>>& a, std::size_t k) {
  const std::size_t m = a.size(), n = m ? a[0].size() : 0;
  Integer g = 0;
  std::vector<std::size_t> rs(k), cs(k);
  std::function<void(std::size_t, std::size_t)> pick_cols;
  std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t i,
                                                                std::size_t from) {
    if (i == k) return pick_cols(0, 0);
    for (std::size_t r = from; r < m; ++r) {
      rs[i] = r;
      pick_rows(i + 1, r + 1);
    }
  };
  pick_cols = [&](std::size_t j, std::size_t from) {
    if (j == k) {
      std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
      for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y) sub[x][y] = a[rs[x]][cs[y]];
      g = gcd(g, det(sub));
      return;
    }
    for (std::size_t c = from; c < n; ++c) {
      cs[j] = c;
      pick_cols(j + 1, c + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

void check_form(const IntMatrix& a, SmithEngine engine) {
  const auto f = smith(a, engine);
  const auto d = (f.U * a * f.V).to_dense();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Integer expect = (i == j && i < f.diag.size()) ? f.diag[i] : Integer(0);
      ASSERT_EQ(d[i][j], expect);
    }
  for (std::size_t i = 0; i + 1 < f.diag.size(); ++i) {
    EXPECT_GE(f.diag[i], 0);
    if (f.diag[i + 1] != 0) EXPECT_EQ(f.diag[i + 1] % f.diag[i], 0);
    else if (f.diag[i] == 0) EXPECT_EQ(f.diag[i + 1], 0);
  }
  const Integer du = det(f.U.to_dense()), dv = det(f.V.to_dense());
  EXPECT_TRUE(du == 1 || du == -1);
  EXPECT_TRUE(dv == 1 || dv == -1);
}

}  // namespace

TEST(Smith, Examples) {
  EXPECT_EQ(smith(IntMatrix::identity(3)).diag, (std::vector<Integer>{1, 1, 1}));
  EXPECT_EQ(smith(dense({{2, 0}, {0, 3}})).diag, (std::vector<Integer>{1, 6}));
  EXPECT_EQ(smith(dense({{2, 4}, {4, 8}})).diag, (std::vector<Integer>{2, 0}));
  EXPECT_TRUE(smith(IntMatrix(0, 0)).diag.empty());
}

TEST(Smith, BothEnginesSatisfyTheForm) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 1 + rng() % 7, n = 1 + rng() % 7;
    const auto a = random_matrix(rng, m, n, 6, 0.6);
    check_form(a, SmithEngine::dense);
    check_form(a, SmithEngine::sparse);
  }
}

TEST(Smith, DiagonalMatchesMinorGcds) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
    const auto a = random_matrix(rng, m, n, 9, 0.7);
    for (auto engine : {SmithEngine::dense, SmithEngine::sparse}) {
      const auto f = smith(a, engine);
      Integer prod = 1;
      for (std::size_t k = 1; k <= f.diag.size(); ++k) {
        prod *= f.diag[k - 1];
        EXPECT_EQ(prod, minor_gcd(a.to_dense(), k));
      }
    }
  }
}

TEST(Smith, EnginesAgreeOnLargerSparseInput) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_matrix(rng, 40, 50, 3, 0.1);
    const auto d = smith_decompose(a, {false, false, SmithEngine::dense});
    const auto s = smith_decompose(a, {false, false, SmithEngine::sparse});
    ASSERT_EQ(d.rank(), s.rank());
    for (std::size_t i = 0; i < d.rank(); ++i)
      EXPECT_EQ(d.pivots[i].value, s.pivots[i].value);
  }
}

TEST(Smith, NoOverflowOnLargeEntries) {
  // entries beyond 64 bits: diag(1, 2^80 * 3)
  Integer big = Integer(1) << 80;
  IntMatrix a(2, 2);
  a.set(0, 0, big);
  a.set(1, 1, 3);
  a.set(0, 1, big + 1);
  check_form(a, SmithEngine::dense);
  check_form(a, SmithEngine::sparse);
}

TEST(Kernel, Examples) {
  EXPECT_TRUE(kernel_basis(IntMatrix::identity(3)).empty());
  EXPECT_EQ(kernel_basis(IntMatrix(2, 3)).size(), 3u);
  const auto k = kernel_basis(dense({{1, -1}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (IntVector{1, 1}));
}

TEST(Kernel, BasisIsSaturatedAndAnnihilated) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = 1 + rng() % 5, n = 2 + rng() % 6;
    const auto a = random_matrix(rng, m, n, 5, 0.6);
    const auto basis = kernel_basis(a);
    EXPECT_EQ(basis.size(), n - integer_rank(a));
    for (const auto& v : basis)
      for (const auto& x : a.apply(v)) EXPECT_EQ(x, 0);
    if (basis.empty()) continue;
    // the stacked basis has all invariant factors 1 (index 1 in ker A)
    std::vector<std::vector<Integer>> rows(basis.begin(), basis.end());
    const auto f = smith(IntMatrix::from_dense(rows));
    for (const auto& d : f.diag) EXPECT_EQ(d, 1);
  }
}

TEST(Cokernel, Examples) {
  const auto z = cokernel_invariants(IntMatrix(3, 0));
  EXPECT_EQ(z.free_rank, 3u);
  EXPECT_TRUE(z.torsion.empty());
  const auto t = cokernel_invariants(dense({{2, 0}, {0, 3}}));
  EXPECT_EQ(t.free_rank, 0u);
  EXPECT_EQ(t.torsion, (std::vector<Integer>{6}));
  const auto s = cokernel_invariants(dense({{1, -1}}));
  EXPECT_EQ(s.free_rank, 0u);
  EXPECT_TRUE(s.torsion.empty());
}

TEST(Cokernel, InvariantUnderPermutations) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const std::size_t m = 2 + rng() % 6, n = 2 + rng() % 6;
    const auto a = random_matrix(rng, m, n, 4, 0.5);
    auto rows = a.to_dense();
    std::shuffle(rows.begin(), rows.end(), rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& r : rows) {
      auto copy = r;
      for (std::size_t j = 0; j < n; ++j) r[j] = copy[perm[j]];
    }
    const auto x = cokernel_invariants(a), y = cokernel_invariants(IntMatrix::from_dense(rows));
    EXPECT_EQ(x.free_rank, y.free_rank);
    EXPECT_EQ(x.torsion, y.torsion);
  }
}

TEST(Solve, Examples) {
  EXPECT_EQ(solve_in_image(IntMatrix::identity(3), {4, -1, 7}), (IntVector{4, -1, 7}));
  EXPECT_FALSE(solve_in_image(dense({{2}}), {3}).has_value());
  const auto a = dense({{1, -1}});
  const auto x = solve_in_image(a, {5});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(a.apply(*x), (IntVector{5}));
}

TEST(Solve, FindsPreimagesOfImages) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> val(-4, 4);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
    const auto a = random_matrix(rng, m, n, 5, 0.6);
    IntVector x(n);
    for (auto& v : x) v = val(rng);
    const auto b = a.apply(x);
    const auto y = solve_in_image(a, b);
    ASSERT_TRUE(y.has_value());
    EXPECT_EQ(a.apply(*y), b);
    // b + e_0 lies in the image only if the solver says so consistently
    auto c = b;
    c[0] += 1;
    if (auto z = solve_in_image(a, c)) EXPECT_EQ(a.apply(*z), c);
  }
}

TEST(Exchange, RoundTrip) {
  std::mt19937_64 rng(7);
  const auto a = random_matrix(rng, 9, 5, 100, 0.4);
  std::stringstream s;
  write_matrix(s, a);
  EXPECT_EQ(read_matrix(s), a);
  std::stringstream bad("2 2 1\n3 1 5\n");
  EXPECT_THROW(read_matrix(bad), std::invalid_argument);
}
