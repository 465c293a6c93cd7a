#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "wreath/orbits.hpp"

using namespace wreath;

namespace {

const LabelSet kTwo("two", {"p", "t"});
const LabelSet kThree("three", {"p", "t", "u"});

Word w(const char* text, int rank = 2) { return parse_word(text, rank); }

Config cfg(std::initializer_list<std::pair<const char*, Label>> items,
           int rank = 2) {
  std::vector<Config::Entry> e;
  for (auto [x, l] : items) e.emplace_back(w(x, rank), l);
  return Config::from_entries(e);
}

Config random_config(std::mt19937_64& rng, int rank, int radius,
                     std::size_t labels) {
  const auto pts = ball(rank, radius);
  std::uniform_int_distribution<std::size_t> lab(0, labels - 1);
  std::bernoulli_distribution keep(0.3);
  std::vector<Config::Entry> e;
  for (Word p : pts)
    if (keep(rng)) e.emplace_back(p, static_cast<Label>(lab(rng)));
  return Config::from_entries(e);
}

Word random_word(std::mt19937_64& rng, int rank, int len) {
  const auto pts = ball(rank, len);
  return pts[rng() % pts.size()];
}

// Independent centre of a support hull: the vertices of minimal eccentricity
// among hull vertices, the hull found as the union of pairwise geodesics.
std::vector<Word> hull_centre(const Config& f) {
  std::set<Word, ShortlexLess> hull;
  for (Word x : f.support())
    for (Word y : f.support())
      for (Word v : geodesic(x, y)) hull.insert(v);
  std::map<std::size_t, std::vector<Word>> by_ecc;
  for (Word v : hull) {
    std::size_t ecc = 0;
    for (Word x : f.support()) ecc = std::max(ecc, distance(v, x));
    by_ecc[ecc].push_back(v);
  }
  return by_ecc.begin()->second;
}

bool oracle_admissible(const Config& f) {
  if (f.empty()) return true;
  const auto c = hull_centre(f);
  if (c.size() == 1) return c[0].is_identity();
  // an edge [e, a_i] with positive a_i
  for (Word v : c)
    if (v.is_identity()) {
      const Word other = c[0] == v ? c[1] : c[0];
      return other.last().sign > 0;
    }
  return false;
}

}  // namespace

TEST(Translate, Examples) {
  const Config f = cfg({{"a1", 1}, {"a1*a2", 1}});
  EXPECT_EQ(translate(Word::identity(2), f), f);
  EXPECT_EQ(translate(w("a1"), cfg({{"e", 1}})), cfg({{"a1", 1}}));
  EXPECT_EQ(translate(w("a1^-1"), f), cfg({{"e", 1}, {"a2", 1}}));
}

TEST(Translate, ActionLaws) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 300; ++i) {
    const Config f = random_config(rng, 2, 2, 3);
    const Word u = random_word(rng, 2, 3), v = random_word(rng, 2, 3);
    EXPECT_EQ(translate(u, translate(v, f)), translate(multiply(u, v), f));
    const Config g = translate(u, f);
    EXPECT_EQ(g.size(), f.size());
    for (const auto& [x, l] : f.entries()) EXPECT_EQ(g.at(multiply(u, x)), l);
  }
}

TEST(Translate, FreeOffTheBasepoint) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    const Config f = random_config(rng, 2, 2, 2);
    const Word u = random_word(rng, 2, 3);
    if (f.empty() || u.is_identity()) continue;
    EXPECT_NE(translate(u, f), f);
  }
}

TEST(Config, BasepointEntriesAreDropped) {
  const Config f = cfg({{"a1", 0}, {"e", 1}});
  EXPECT_EQ(f.size(), 1u);
  EXPECT_EQ(f, cfg({{"e", 1}}));
  EXPECT_THROW(cfg({{"e", 1}, {"a1*a1^-1", 1}}), std::invalid_argument);
}

TEST(SupportTree, Examples) {
  const auto t1 = support_tree(cfg({{"e", 1}}));
  EXPECT_EQ(t1.vertices.size(), 1u);
  EXPECT_TRUE(t1.edges.empty());
  const auto t2 = support_tree(cfg({{"a1^-1", 1}, {"a1", 1}}));
  EXPECT_EQ(t2.vertices, (std::vector<Word>{w("e"), w("a1"), w("a1^-1")}));
  EXPECT_EQ(t2.edges.size(), 2u);
  const auto t3 = support_tree(cfg({{"a1", 1}, {"a1*a2", 1}}));
  EXPECT_EQ(t3.vertices.size(), 2u);
  ASSERT_EQ(t3.edges.size(), 1u);
  EXPECT_EQ(t3.edges[0], (CayleyEdge{w("a1"), 2}));
  EXPECT_THROW(support_tree(Config{}), std::invalid_argument);
}

TEST(SupportTree, IsATree) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Config f = random_config(rng, 2, 3, 2);
    if (f.empty()) continue;
    const auto t = support_tree(f);
    EXPECT_EQ(t.edges.size() + 1, t.vertices.size());
  }
}

TEST(Barycentre, Examples) {
  EXPECT_EQ(barycentre(support_tree(cfg({{"a2", 1}}))), Barycentre{w("a2")});
  EXPECT_EQ(barycentre(support_tree(cfg({{"a1^-1", 1}, {"a1", 1}}))),
            Barycentre{w("e")});
  EXPECT_EQ(barycentre(support_tree(cfg({{"a1", 1}, {"a1*a2", 1}}))),
            (Barycentre{CayleyEdge{w("a1"), 2}}));
}

TEST(Barycentre, AgreesWithEccentricityCentreAndDiameterRoute) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const Config f = random_config(rng, 2, 3, 2);
    if (f.empty()) continue;
    const Barycentre b = barycentre(support_tree(f));
    EXPECT_EQ(b, support_barycentre(f));
    const auto centre = hull_centre(f);
    if (centre.size() == 1) {
      EXPECT_EQ(b, Barycentre{centre[0]});
    } else {
      ASSERT_EQ(centre.size(), 2u);
      EXPECT_EQ(b, Barycentre{CayleyEdge::between(centre[0], centre[1])});
    }
  }
}

TEST(Barycentre, TranslationEquivariant) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const Config f = random_config(rng, 2, 2, 2);
    if (f.empty()) continue;
    const Word u = random_word(rng, 2, 3);
    const Barycentre b = support_barycentre(f);
    const Barycentre moved = support_barycentre(translate(u, f));
    if (b.is_vertex()) {
      EXPECT_EQ(moved, Barycentre{multiply(u, b.vertex())});
    } else {
      const CayleyEdge e = b.edge();
      EXPECT_EQ(moved, (Barycentre{CayleyEdge{multiply(u, e.base), e.gen}}));
    }
  }
}

TEST(Admissible, Examples) {
  EXPECT_TRUE(is_admissible(support_tree(cfg({{"e", 1}}))));
  EXPECT_FALSE(is_admissible(support_tree(cfg({{"a1", 1}}))));
  EXPECT_TRUE(is_admissible(support_tree(cfg({{"e", 1}, {"a1", 1}}))));
  EXPECT_FALSE(is_admissible(support_tree(cfg({{"e", 1}, {"a1^-1", 1}}))));
}

TEST(Canonicalize, Examples) {
  const auto one = canonicalize(Config{}, 2);
  EXPECT_TRUE(one.config.empty());
  EXPECT_TRUE(one.shift.is_identity());
  const auto a = canonicalize(cfg({{"a1", 1}}));
  EXPECT_EQ(a.config, cfg({{"e", 1}}));
  EXPECT_EQ(a.shift, w("a1"));
  const auto b = canonicalize(cfg({{"a1", 1}, {"a1*a2", 2}}));
  EXPECT_EQ(b.config, cfg({{"e", 1}, {"a2", 2}}));
  EXPECT_EQ(b.shift, w("a1"));
  // negative edge [e, a1^-1] is stored as [a1^-1, e] and shifted by a1^-1
  const auto c = canonicalize(cfg({{"e", 1}, {"a1^-1", 2}}));
  EXPECT_EQ(c.config, cfg({{"a1", 1}, {"e", 2}}));
  EXPECT_EQ(c.shift, w("a1^-1"));
}

TEST(Canonicalize, InvariantAndReconstructs) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 400; ++i) {
    const Config f = random_config(rng, 2, 2, 3);
    const auto c = canonicalize(f, 2);
    EXPECT_EQ(translate(c.shift, c.config), f);
    EXPECT_TRUE(is_canonical(c.config));
    EXPECT_EQ(oracle_admissible(c.config), true);
    const Word u = random_word(rng, 2, 3);
    EXPECT_EQ(canonicalize(translate(u, f), 2).config, c.config);
  }
}

TEST(Enumerate, Examples) {
  EXPECT_EQ(enumerate_canonical(kTwo, 2, 0).size(), 2u);
  EXPECT_EQ(enumerate_canonical(kThree, 1, 0).size(), 3u);
  const auto r1 = enumerate_canonical(kTwo, 2, 1);
  EXPECT_EQ(r1.size(), 26u);
  EXPECT_TRUE(r1.front().empty());
}

// Brute force over all 2^5 subsets of ball(2, 1) with the eccentricity
// oracle for admissibility.
TEST(Enumerate, MatchesSubsetBruteForce) {
  const auto pts = ball(2, 1);
  std::set<std::string> expect;
  for (unsigned mask = 0; mask < (1u << pts.size()); ++mask) {
    std::vector<Config::Entry> e;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (mask >> i & 1) e.emplace_back(pts[i], 1);
    const Config f = Config::from_entries(e);
    if (oracle_admissible(f)) expect.insert(serialize(f, kTwo));
  }
  EXPECT_EQ(expect.size(), 26u);
  std::set<std::string> got;
  for (const auto& c : enumerate_canonical(kTwo, 2, 1)) got.insert(serialize(c, kTwo));
  EXPECT_EQ(got, expect);
}

TEST(Enumerate, StableUnderEnlargement) {
  for (auto [labels, rank, r] : {std::tuple{&kTwo, 2, 0}, std::tuple{&kTwo, 2, 1},
                                  std::tuple{&kThree, 1, 2}, std::tuple{&kTwo, 3, 0}}) {
    const auto small = enumerate_canonical(*labels, rank, r);
    const auto big = enumerate_canonical(*labels, rank, r + 1);
    const std::unordered_set<Config, ConfigHash> b(big.begin(), big.end());
    for (const auto& c : small) EXPECT_TRUE(b.contains(c));
  }
}

TEST(Enumerate, TooLarge) {
  EXPECT_THROW(enumerate_configs(8, 3, 2, 1000), TruncationTooLarge);
}

TEST(Oracle, Examples) {
  const auto part = orbit_oracle(kThree, 2, 1);
  auto class_of = [&](const Config& c) {
    for (std::size_t i = 0; i < part.configs.size(); ++i)
      if (part.configs[i] == c) return part.klass[i];
    throw std::logic_error("missing");
  };
  EXPECT_EQ(class_of(cfg({{"a1", 1}})), class_of(cfg({{"a2", 1}})));
  EXPECT_NE(class_of(cfg({{"e", 1}})), class_of(cfg({{"e", 2}})));
  EXPECT_EQ(orbit_oracle(kTwo, 2, 1).class_count, 26u);
}

TEST(Oracle, OneCanonicalPerClass) {
  for (auto [labels, rank, radius] :
       {std::tuple{&kTwo, 2, 1}, std::tuple{&kThree, 2, 1}, std::tuple{&kThree, 1, 2},
        std::tuple{&kTwo, 3, 1}}) {
    const auto part = orbit_oracle(*labels, rank, radius);
    std::vector<std::optional<Config>> rep(part.class_count);
    for (std::size_t i = 0; i < part.configs.size(); ++i) {
      const Config canon = canonicalize(part.configs[i], rank).config;
      auto& slot = rep[part.klass[i]];
      if (!slot) slot = canon;
      EXPECT_EQ(*slot, canon);
    }
    std::set<std::string> reps;
    for (const auto& r : rep) reps.insert(serialize(*r, *labels));
    std::set<std::string> canon;
    for (const auto& c : enumerate_canonical(*labels, rank, radius))
      canon.insert(serialize(c, *labels));
    EXPECT_EQ(reps, canon);
  }
}

// Inflating the ball further merges nothing: the 2r+1 bound is never hit.
TEST(Oracle, InflationBoundIsSufficient) {
  for (int r = 0; r <= 1; ++r) {
    const auto tight = orbit_oracle(kThree, 2, r);
    const auto loose = orbit_oracle(kThree, 2, r, 2 * r + 2);
    EXPECT_EQ(tight.klass, loose.klass);
    EXPECT_GT(loose.explored, tight.explored);
  }
}

TEST(Serialize, FormatAndRoundTrip) {
  EXPECT_EQ(serialize(Config{}, kThree), "{}");
  const Config f = cfg({{"a2*a1", 2}, {"e", 1}, {"a1^-1", 1}, {"a1*a1", 2}});
  EXPECT_EQ(serialize(f, kThree), "{e:t,a1^-1:t,a1*a1:u,a2*a1:u}");
  EXPECT_EQ(parse_config(serialize(f, kThree), kThree, 2), f);
  EXPECT_THROW(parse_config("{e:p}", kThree, 2), std::invalid_argument);
  EXPECT_THROW(parse_config("{e:q}", kThree, 2), std::invalid_argument);
  EXPECT_THROW(parse_config("e:t", kThree, 2), std::invalid_argument);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const Config g = random_config(rng, 2, 2, 3);
    EXPECT_EQ(parse_config(serialize(g, kThree), kThree, 2), g);
  }
}
