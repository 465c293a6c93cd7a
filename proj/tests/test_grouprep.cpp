#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "wreath/grouprep.hpp"

using namespace wreath;

TEST(Builtins, Z2) {
  const auto g = builtin_group("Z2");
  EXPECT_EQ(g.order(), 2);
  ASSERT_EQ(g.irreps().size(), 2u);
  EXPECT_EQ(g.irreps()[0].id, "triv");
  EXPECT_EQ(g.irreps()[1].id, "sgn");
}

TEST(Builtins, S3) {
  const auto g = builtin_group("S3");
  EXPECT_EQ(g.order(), 6);
  EXPECT_EQ(g.irrep("std").dim, 2);
  EXPECT_EQ(g.irrep("sgn").dim, 1);
}

TEST(Builtins, AllSatisfyBurnsideInTraceCoordinates) {
  for (const auto& name : {"Z2", "Z3", "Z4", "Z7", "S3", "D4", "Q8"}) {
    const auto g = builtin_group(name);
    Rational sum(0);
    for (Label l = 0; l < g.min_projections().size(); ++l) {
      const Rational k = g.trace(l) * g.order();
      sum += k * k;
    }
    EXPECT_EQ(sum, Rational(g.order())) << name;
    ASSERT_TRUE(g.table().has_value()) << name;
    EXPECT_EQ(g.table()->order(), g.order());
  }
  EXPECT_THROW(builtin_group("Z1"), GroupSpecError);
  EXPECT_THROW(builtin_group("A5"), GroupSpecError);
}

// The shipped tables are groups with the advertised number of
// one-dimensional characters: |F / [F, F]| = number of dim-1 irreps.
TEST(Builtins, TablesMatchAbelianization) {
  for (const auto& name : {"Z3", "S3", "D4", "Q8"}) {
    const auto g = builtin_group(name);
    const auto& t = *g.table();
    std::vector<bool> in_commutator(g.order(), false);
    in_commutator[0] = true;
    bool grew = true;
    while (grew) {  // close the commutator set under multiplication
      grew = false;
      for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < g.order(); ++b) {
          const int c = t.mul(t.mul(a, b), t.mul(t.inv(a), t.inv(b)));
          if (!in_commutator[c]) in_commutator[c] = grew = true;
          for (int x = 0; x < g.order(); ++x)
            if (in_commutator[x] && in_commutator[c] &&
                !in_commutator[t.mul(x, c)])
              in_commutator[t.mul(x, c)] = grew = true;
        }
    }
    const auto derived = std::count(in_commutator.begin(), in_commutator.end(), true);
    const auto linear = std::count_if(g.irreps().begin(), g.irreps().end(),
                                      [](const IrrepLabel& r) { return r.dim == 1; });
    EXPECT_EQ(g.order() / derived, linear) << name;
  }
}

TEST(Load, BurnsideViolationNamesTheIdentity) {
  try {
    load_group_file(WREATH_TEST_DATA "/bad_burnside.yaml");
    FAIL();
  } catch (const GroupSpecError& e) {
    EXPECT_NE(std::string(e.what()).find("Burnside"), std::string::npos);
  }
}

TEST(Load, Errors) {
  EXPECT_THROW(load_group("name: X\norder: 1\nirreps: [{id: t, dim: 1, trivial: true}]"),
               GroupSpecError);
  EXPECT_THROW(load_group("name: X\norder: 2\nirreps: [{id: t, dim: 1}, {id: s, dim: 1}]"),
               GroupSpecError);
  EXPECT_THROW(load_group("name: X\norder: 2\nirreps: [{id: t, dim: 1, trivial: true},"
                          " {id: s, dim: 1, trivial: true}]"),
               GroupSpecError);
  EXPECT_THROW(load_group("name: X\norder: 2\nirreps: [{id: t, dim: 1, trivial: true},"
                          " {id: t, dim: 1}]"),
               GroupSpecError);
  EXPECT_THROW(load_group("name: X\nirreps: []"), GroupSpecError);
  EXPECT_THROW(load_group("[1, 2"), GroupSpecError);
  // a table that is not a group
  EXPECT_THROW(load_group("name: X\norder: 2\nirreps: [{id: t, dim: 1, trivial: true},"
                          " {id: s, dim: 1}]\ntable: [[0, 1], [1, 1]]"),
               GroupSpecError);
}

TEST(Load, JsonDocumentReordersTrivialFirst) {
  const auto g = load_group_file(WREATH_TEST_DATA "/s3.json");
  EXPECT_EQ(g.name(), "S3doc");
  EXPECT_EQ(g.dual().basepoint(), "triv");
  EXPECT_EQ(g.min_projections().basepoint(), "p_triv");
  EXPECT_FALSE(g.table().has_value());
  EXPECT_EQ(resolve_group(WREATH_TEST_DATA "/s3.json").order(), 6);
}

TEST(MuF, Examples) {
  const auto z2 = builtin_group("Z2");
  const auto p = mu_F(z2, z2.irrep("triv"));
  EXPECT_TRUE(p.basepoint);
  EXPECT_EQ(p.trace, Rational(1, 2));

  const auto s3 = builtin_group("S3");
  EXPECT_EQ(mu_F(s3, s3.irrep("std")).trace, Rational(1, 3));
  const auto sgn = mu_F(s3, s3.irrep("sgn"));
  EXPECT_FALSE(sgn.basepoint);
  EXPECT_EQ(sgn.trace, Rational(1, 6));
  EXPECT_THROW(mu_F(s3, IrrepLabel{"rho", 2, false}), GroupSpecError);
}

TEST(MuF, BijectionPreservingBasepointAndDimension) {
  for (const auto& name : shipped_builtins()) {
    const auto g = builtin_group(name);
    std::set<Label> image;
    for (Label l = 0; l < g.dual().size(); ++l) {
      const Label m = mu_F(g, l);
      image.insert(m);
      EXPECT_EQ(m == kBasepoint, l == kBasepoint);
      EXPECT_EQ(g.trace(m) * g.order(), Rational(g.irreps()[l].dim));
    }
    EXPECT_EQ(image.size(), g.min_projections().size());
  }
}

TEST(LabelSet, RejectsTrivialSets) {
  EXPECT_THROW(LabelSet("one", {"p"}), GroupSpecError);
}
