#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "patmat/errors.hpp"
#include "patmat/paths.hpp"
#include "patmat/pattern.hpp"
#include "patmat/words.hpp"

using namespace patmat;

namespace {

Pattern full_idx() { return Pattern::full(Space::index); }
Pattern lower_idx() { return to_index_space(preset("lower-triangular")); }

std::vector<Pattern> pattern_pool() {
  return {full_idx(),
          lower_idx(),
          to_index_space(preset("upper-triangular")),
          to_index_space(preset("three-discs")),
          to_index_space(Pattern::rect(0.1, 0.2, 0.7, 0.9)),
          to_index_space(Pattern::unite({Pattern::disc(0.3, 0.3, 0.3), Pattern::half_plane(-1, 0, -0.8)})),
          Pattern::empty(Space::index)};
}

// relabel colors in order of first appearance
std::vector<int> canonical(const std::vector<int>& v) {
  std::map<int, int> m;
  std::vector<int> out;
  for (int c : v) {
    auto it = m.find(c);
    if (it == m.end()) it = m.emplace(c, static_cast<int>(m.size()) + 1).first;
    out.push_back(it->second);
  }
  return out;
}

std::string random_word(std::mt19937_64& rng, std::size_t max_len, bool balanced) {
  const std::size_t letters = 1 + rng() % 2;
  std::size_t n = 1 + rng() % (max_len / 2);
  std::string s;
  if (balanced) {
    for (std::size_t k = 0; k < n; ++k) {
      char base = static_cast<char>('a' + rng() % letters);
      s += base;
      s += static_cast<char>(base - 'a' + 'A');
    }
    std::shuffle(s.begin(), s.end(), rng);
  } else {
    std::size_t len = 1 + rng() % max_len;
    for (std::size_t k = 0; k < len; ++k) {
      char base = static_cast<char>('a' + rng() % letters);
      s += (rng() & 1) ? static_cast<char>(base - 'a' + 'A') : base;
    }
  }
  return s;
}

std::uint64_t factorial_u(int k) { return k <= 1 ? 1 : k * factorial_u(k - 1); }

}  // namespace

TEST(PathFn, Validation) {
  EXPECT_THROW(PathFn({1}), ValidationError);
  EXPECT_THROW(PathFn({1, 2}), ValidationError);
  EXPECT_THROW(PathFn({0, 1, 0}), ValidationError);
  PathFn p({1, 2, 3, 2, 1});
  EXPECT_EQ(p.length(), 4u);
  EXPECT_EQ(p.color_count(), 3);
  EXPECT_EQ(p.render(), "1,2,3,2,1");
}

TEST(Classify, MinimalWedge) {
  auto c = classify_path(PathFn({1, 2, 1}), Word::parse("aA"));
  EXPECT_TRUE(c.social);
  EXPECT_TRUE(c.strict_pairing);
  EXPECT_TRUE(c.polar_paired);
  EXPECT_EQ(c.color_count, 2);
  EXPECT_TRUE(c.constraint);
}

TEST(Classify, UnstarredPairIsNotPolar) {
  auto c = classify_path(PathFn({1, 2, 1}), Word::parse("aa"));
  EXPECT_TRUE(c.pairing);
  EXPECT_FALSE(c.polar_paired);
  EXPECT_FALSE(c.constraint);
}

TEST(Classify, NestedWedge) {
  auto c = classify_path(PathFn({1, 2, 3, 2, 1}), Word::parse("aAaA"));
  EXPECT_TRUE(c.strict_pairing);
  EXPECT_TRUE(c.polar_paired);
  EXPECT_EQ(c.color_count, 3);
  EXPECT_TRUE(c.constraint);
}

TEST(Classify, OrientationMatters) {
  // edge (1,2) read unstarred at k=0 and starred at k=1 going 2->1: polar
  EXPECT_TRUE(classify_path(PathFn({1, 2, 1}), Word::parse("aA")).polar_paired);
  // same edge set but the starred traversal runs 1->2: not polar
  auto c = classify_path(PathFn({1, 2, 1, 2, 1}), Word::parse("aaAA"));
  EXPECT_TRUE(c.pairing);
  EXPECT_FALSE(c.strict_pairing);
  // different letters cannot pair
  EXPECT_FALSE(classify_path(PathFn({1, 2, 1}), Word::parse("aB")).polar_paired);
}

TEST(Classify, LengthMismatch) {
  EXPECT_THROW(classify_path(PathFn({1, 2, 1}), Word::parse("aAa")), ValidationError);
}

TEST(Classify, FlagImplications) {
  auto w = Word::parse("aAaA");
  for_each_closed_path(4, 3, [&](const PathFn& p) {
    auto c = classify_path(p, w);
    EXPECT_TRUE(!c.constraint || (c.strict_pairing && c.polar_paired));
    EXPECT_TRUE(!c.strict_pairing || c.pairing);
    EXPECT_TRUE(!c.pairing || c.social);
  });
}

TEST(Wedge, Examples) {
  EXPECT_EQ(find_strict_wedge(PathFn({1, 2, 1}), Word::parse("aA")), 0u);
  EXPECT_EQ(find_strict_wedge(PathFn({1, 2, 3, 2, 1}), Word::parse("aAaA")), 1u);
  EXPECT_FALSE(find_strict_wedge(PathFn({1, 2, 1, 2, 1}), Word::parse("aAaA")).has_value());
}

TEST(Wedge, RemovalKeepsClosedPath) {
  auto p = remove_wedge(PathFn({1, 2, 3, 2, 1}), 1);
  EXPECT_EQ(p.values(), (std::vector<int>{1, 2, 1}));
  EXPECT_THROW(remove_wedge(PathFn({1, 2, 1}), 1), ValidationError);
}

TEST(Shapes, Examples) {
  auto one = enumerate_shapes(Word::parse("aA"));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].path.values(), (std::vector<int>{1, 2, 1}));
  EXPECT_TRUE(enumerate_shapes(Word::parse("aAa")).empty());
  auto two = enumerate_shapes(Word::parse("aAaA"));
  ASSERT_EQ(two.size(), 2u);
  std::set<std::vector<int>> got{two[0].path.values(), two[1].path.values()};
  EXPECT_EQ(got, (std::set<std::vector<int>>{{1, 2, 1, 3, 1}, {1, 2, 3, 2, 1}}));
}

TEST(Shapes, CatalanCountsOnAlternatingWords) {
  const std::size_t catalan[] = {1, 2, 5, 14, 42, 132};
  std::string w;
  for (int n = 1; n <= 6; ++n) {
    w += "aA";
    EXPECT_EQ(enumerate_shapes(Word::parse(w)).size(), catalan[n - 1]) << w;
  }
}

TEST(Shapes, Deterministic) {
  auto a = enumerate_shapes(Word::parse("aAaAaaAA"));
  auto b = enumerate_shapes(Word::parse("aAaAaaAA"));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].path.values(), b[k].path.values());
}

TEST(Shapes, LengthCap) {
  std::string w;
  for (int k = 0; k < 7; ++k) w += "aA";
  EXPECT_THROW(enumerate_shapes(Word::parse(w)), BudgetError);
  EXPECT_EQ(enumerate_shapes(Word::parse(w), 14).size(), 429u);
}

TEST(Shapes, MatchBruteForceCanonicalForms) {
  // every word over {a,A,b,B} up to length 6 with n+1 <= 4 colors
  const std::string alphabet = "aAbB";
  std::set<std::string> seen;
  for (std::size_t len = 2; len <= 6; len += 2) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < len; ++k) total *= alphabet.size();
    for (std::size_t code = 0; code < total; ++code) {
      std::string s;
      for (std::size_t k = 0, c = code; k < len; ++k, c /= alphabet.size()) s += alphabet[c % alphabet.size()];
      auto w = Word::parse(s);
      if (!seen.insert(w.render()).second) continue;
      auto shapes = enumerate_shapes(w);
      auto naive = naive_constraint_paths(w);
      std::set<std::vector<int>> from_naive, from_shapes;
      for (const auto& p : naive) from_naive.insert(canonical(p.values()));
      for (const auto& sh : shapes) from_shapes.insert(sh.path.values());
      ASSERT_EQ(from_shapes, from_naive) << s;
      ASSERT_EQ(shapes.size(), from_shapes.size()) << "duplicates for " << s;
      ASSERT_EQ(naive.size(), shapes.size() * factorial_u(static_cast<int>(len / 2 + 1))) << s;
    }
  }
}

TEST(Shapes, EmptyIffUnbalancedForSingleLetterWords) {
  for (std::size_t len = 1; len <= 10; ++len) {
    for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
      std::string s;
      for (std::size_t k = 0; k < len; ++k) s += (bits >> k & 1) ? 'A' : 'a';
      auto w = Word::parse(s);
      ASSERT_EQ(enumerate_shapes(w).empty(), !is_even_balanced(w)) << s;
    }
  }
}

TEST(Shapes, NonEmptyImpliesBalancedForMultiLetterWords) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 400; ++k) {
    auto w = Word::parse(random_word(rng, 10, k % 2 == 0));
    EXPECT_TRUE(enumerate_shapes(w).empty() || is_even_balanced(w)) << w.render();
  }
  // balanced but every pairing crosses letters: no shapes
  EXPECT_TRUE(enumerate_shapes(Word::parse("abAB")).empty());
  EXPECT_EQ(enumerate_shapes(Word::parse("abBA")).size(), 1u);
}

TEST(Shapes, EveryShapeHasStrictWedge) {
  std::mt19937_64 rng(29);
  std::vector<std::string> words = {"aAaAaAaAaAaA", "aaaAAAaaaAAA", "aAbBaAbB", "abBAabBA"};
  for (int k = 0; k < 60; ++k) words.push_back(random_word(rng, 12, true));
  for (const auto& s : words) {
    auto w = Word::parse(s);
    for (const auto& sh : enumerate_shapes(w)) {
      auto k2 = find_strict_wedge(sh.path, w);
      ASSERT_TRUE(k2.has_value()) << s << " " << sh.path.render();
      if (sh.path.length() == 2) continue;
      auto shorter = remove_wedge(sh.path, *k2);
      EXPECT_EQ(shorter.length() + 2, sh.path.length());
      EXPECT_EQ(shorter.values().front(), shorter.values().back());
    }
  }
}

TEST(Shapes, ConstraintsDescribeCells) {
  auto w = Word::parse("aAaA");
  for (const auto& sh : enumerate_shapes(w)) {
    EXPECT_EQ(sh.pairs.size(), 2u);
    EXPECT_EQ(sh.cells.size(), 2u);
    for (const auto& pr : sh.pairs) {
      EXPECT_FALSE(w[pr.unstarred_edge].starred);
      EXPECT_TRUE(w[pr.starred_edge].starred);
    }
  }
}

TEST(NaivePaths, Examples) {
  auto aA = Word::parse("aA");
  auto two = naive_paths(aA, 2);
  EXPECT_EQ(two.size(), 4u);
  EXPECT_EQ(std::count_if(two.begin(), two.end(), [](const auto& c) { return c.cls.constraint; }), 2);

  auto three = naive_paths(aA, 3);
  std::map<int, int> anchored;
  for (const auto& c : three)
    if (c.cls.constraint) ++anchored[c.path[0]];
  EXPECT_EQ(anchored, (std::map<int, int>{{1, 2}, {2, 2}, {3, 2}}));

  for (int colors = 1; colors <= 5; ++colors)
    for (const auto& c : naive_paths(Word::parse("aAa"), colors)) EXPECT_FALSE(c.cls.constraint);

  EXPECT_THROW(naive_paths(Word::parse("aAaAaAaA"), 10), BudgetError);
}

TEST(NaivePaths, StrictPairingForcedAndColorBound) {
  const std::vector<std::string> words = {"aA", "aAaA", "aaAA", "aAAa", "aAaAaA", "aaAAaA", "abBA", "aAbBaA"};
  for (const auto& s : words) {
    auto w = Word::parse(s);
    const int n = static_cast<int>(w.size() / 2);
    const int colors = std::min(n + 3, 6);
    for (const auto& c : naive_paths(w, colors)) {
      if (!c.cls.social) continue;
      EXPECT_LE(c.cls.color_count, n + 1) << s << " " << c.path.render();
      EXPECT_TRUE(c.cls.color_count != n + 1 || c.cls.strict_pairing) << s << " " << c.path.render();
    }
  }
}

TEST(NaivePaths, AnchorUniformityOnFull) {
  for (const std::string s : {"aAaA", "aaAA", "aAaAaA", "aaAAaA"}) {
    auto w = Word::parse(s);
    std::map<int, int> anchored;
    const int colors = 5;
    for (const auto& c : naive_paths(w, colors))
      if (c.cls.constraint) ++anchored[c.path[0]];
    ASSERT_EQ(anchored.size(), static_cast<std::size_t>(colors)) << s;
    for (const auto& [anchor, count] : anchored) EXPECT_EQ(count, anchored.begin()->second) << s;
  }
}

TEST(FEval, Examples) {
  auto aA = Word::parse("aA");
  auto shapes = enumerate_shapes(aA);
  std::vector<double> x{0.3, 0.7};
  std::vector<Pattern> full{full_idx()}, lower{lower_idx()};
  EXPECT_EQ(f_eval(shapes, aA, full, x), 2u);
  EXPECT_EQ(f_eval(shapes, aA, lower, x), 1u);

  auto w2 = Word::parse("aAaA");
  EXPECT_EQ(f_eval(enumerate_shapes(w2), w2, lower, std::vector<double>{0.12, 0.55, 0.91}), 4u);

  std::vector<double> dup{0.4, 0.4};
  EXPECT_EQ(f_eval(shapes, aA, full, dup), 0u);
  EXPECT_THROW(f_eval(shapes, aA, full, std::vector<double>{0.1, 0.2, 0.3}), ValidationError);
}

TEST(FEval, RejectsPictureSpacePatterns) {
  auto w = Word::parse("aA");
  EXPECT_THROW(PathCounter(enumerate_shapes(w), w, {preset("three-discs")}), ValidationError);
  EXPECT_THROW(PathCounter(enumerate_shapes(w), w, {}), ValidationError);
}

TEST(FNaive, Examples) {
  auto w = Word::parse("aaAA");
  std::vector<double> x{0.2, 0.5, 0.8};
  std::vector<Pattern> full{full_idx()}, lower{lower_idx()}, none{Pattern::empty(Space::index)};
  EXPECT_EQ(f_naive(w, full, x), 6u);
  EXPECT_EQ(f_naive(w, lower, x), 1u);
  EXPECT_EQ(f_naive(Word::parse("aA"), none, std::vector<double>{0.2, 0.6}), 0u);
  EXPECT_THROW(naive_constraint_paths(Word::parse("aAaAaAaAaA")), BudgetError);
}

TEST(FEval, TriangularIsConstantPowerOfN) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Pattern> lower{lower_idx()};
  std::string s;
  std::uint64_t expect[] = {1, 4, 27, 256, 3125};
  for (int n = 1; n <= 5; ++n) {
    s += "aA";
    auto w = Word::parse(s);
    PathCounter f(enumerate_shapes(w), w, lower);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> x(n + 1);
      for (auto& v : x) v = u(rng);
      ASSERT_EQ(f(x), expect[n - 1]) << s;
    }
  }
}

TEST(FEval, MatchesNaiveOnRandomTriples) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0, 1);
  auto pool = pattern_pool();
  std::map<std::string, std::vector<PathFn>> naive_cache;
  std::map<std::string, std::vector<Shape>> shape_cache;
  // brute force at n = 4 costs 5^8 classifications per word, so the 500
  // triples share a random pool of words
  std::vector<std::string> words;
  for (int k = 0; k < 40; ++k) words.push_back(random_word(rng, 8, k % 5 != 0));
  int nonzero = 0;
  for (int t = 0; t < 500; ++t) {
    auto w = Word::parse(words[rng() % words.size()]);
    auto s = w.render();
    if (!naive_cache.count(s)) {
      naive_cache.emplace(s, naive_constraint_paths(w));
      shape_cache.emplace(s, enumerate_shapes(w));
    }
    std::vector<Pattern> pats;
    for (int l = 0; l < w.letter_count(); ++l) pats.push_back(pool[rng() % pool.size()]);
    std::vector<double> x(w.size() / 2 + 1);
    for (auto& v : x) v = u(rng);
    if (t % 50 == 7 && x.size() > 1) x[1] = x[0];
    auto fe = f_eval(shape_cache.at(s), w, pats, x);
    auto fn = f_naive(naive_cache.at(s), w, pats, x);
    ASSERT_EQ(fe, fn) << s << " trial " << t;
    nonzero += fe > 0;
  }
  EXPECT_GT(nonzero, 100);
}

TEST(FEval, PermutationSymmetryOnFull) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Pattern> full{full_idx()};
  for (const std::string s : {"aAaAaA", "aaAaAA", "aaaAAA"}) {
    auto w = Word::parse(s);
    PathCounter f(enumerate_shapes(w), w, full);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> x(4);
      for (auto& v : x) v = u(rng);
      auto base = f(x);
      EXPECT_EQ(base, f.shape_count() * 24);
      std::shuffle(x.begin(), x.end(), rng);
      EXPECT_EQ(f(x), base);
    }
  }
}

TEST(FEval, PermutedPointMatchesPermutedNaive) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0, 1);
  auto pats = std::vector<Pattern>{to_index_space(preset("three-discs"))};
  auto w = Word::parse("aAaAaA");
  auto shapes = enumerate_shapes(w);
  auto naive = naive_constraint_paths(w);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x(4);
    for (auto& v : x) v = u(rng);
    std::shuffle(x.begin(), x.end(), rng);
    EXPECT_EQ(f_eval(shapes, w, pats, x), f_naive(naive, w, pats, x));
  }
}
