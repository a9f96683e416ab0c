#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "patmat/ensemble.hpp"
#include "patmat/errors.hpp"
#include "patmat/pattern.hpp"
#include "patmat/seeding.hpp"
#include "patmat/words.hpp"

using namespace patmat;

namespace {

Pattern full_idx() { return Pattern::full(Space::index); }
Pattern lower_idx() { return to_index_space(preset("lower-triangular")); }
Pattern discs_idx() { return to_index_space(preset("three-discs")); }

const EntryDist kAll[] = {EntryDist::gaussian_real, EntryDist::gaussian_complex, EntryDist::rademacher,
                          EntryDist::fourth_root};

// Straightforward product of dense complex matrices; independent of the
// library's trace routine.
std::complex<double> reference_trace(const std::vector<MatrixSample>& mats, const Word& w) {
  const auto n = static_cast<Eigen::Index>(mats.front().size);
  ComplexMatrix acc = ComplexMatrix::Identity(n, n);
  for (const auto& s : w.symbols()) {
    ComplexMatrix m = mats[static_cast<std::size_t>(s.letter)].as_complex();
    acc = s.starred ? ComplexMatrix(acc * m.adjoint()) : ComplexMatrix(acc * m);
  }
  return acc.trace() / static_cast<double>(n);
}

}  // namespace

TEST(EntryDist, Names) {
  for (auto d : kAll) EXPECT_EQ(parse_entry_dist(to_string(d)), d);
  EXPECT_THROW(parse_entry_dist("cauchy"), ValidationError);
  EXPECT_TRUE(is_real(EntryDist::rademacher));
  EXPECT_FALSE(is_real(EntryDist::fourth_root));
}

TEST(EntryDist, MomentTable) {
  EXPECT_EQ(entry_moment(EntryDist::rademacher, 3, 1), 1.0);
  EXPECT_EQ(entry_moment(EntryDist::rademacher, 2, 1), 0.0);
  EXPECT_EQ(entry_moment(EntryDist::gaussian_real, 2, 2), 3.0);
  EXPECT_EQ(entry_moment(EntryDist::gaussian_real, 3, 3), 15.0);
  EXPECT_EQ(entry_moment(EntryDist::gaussian_real, 1, 0), 0.0);
  EXPECT_EQ(entry_moment(EntryDist::gaussian_complex, 2, 2), 2.0);
  EXPECT_EQ(entry_moment(EntryDist::gaussian_complex, 3, 3), 6.0);
  EXPECT_EQ(entry_moment(EntryDist::gaussian_complex, 2, 0), 0.0);
  EXPECT_EQ(entry_moment(EntryDist::fourth_root, 4, 0), 1.0);
  EXPECT_EQ(entry_moment(EntryDist::fourth_root, 2, 0), 0.0);
  EXPECT_EQ(entry_moment(EntryDist::fourth_root, 3, 3), 1.0);
  EXPECT_EQ(entry_moment(EntryDist::fourth_root, 5, 1), 1.0);
  EXPECT_EQ(entry_moment(EntryDist::gaussian_real, 0, 0), 1.0);
}

TEST(EntryDist, MomentRulesHoldBySimulation) {
  const std::size_t draws = 400000;
  for (auto d : kAll) {
    for (unsigned p = 0; p <= 3; ++p) {
      for (unsigned q = 0; q <= 3; ++q) {
        if (p + q == 0) continue;
        std::complex<double> sum = 0;
        double sq = 0;
        for (std::size_t k = 0; k < draws; ++k) {
          auto z = draw_entry(d, derive_seed(99, {k}));
          auto v = std::pow(z, static_cast<double>(p)) * std::pow(std::conj(z), static_cast<double>(q));
          sum += v;
          sq += std::norm(v);
        }
        const auto mean = sum / static_cast<double>(draws);
        const double se = std::sqrt(sq / draws / draws) + 1e-12;
        const double expect = entry_moment(d, p, q);
        EXPECT_NEAR(mean.real(), expect, 5 * se) << to_string(d) << " p=" << p << " q=" << q;
        EXPECT_NEAR(mean.imag(), 0.0, 5 * se) << to_string(d) << " p=" << p << " q=" << q;
      }
    }
  }
}

TEST(EntryDist, Supports) {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    auto r = draw_entry(EntryDist::rademacher, k);
    EXPECT_EQ(std::abs(r.real()), 1.0);
    EXPECT_EQ(r.imag(), 0.0);
    auto f = draw_entry(EntryDist::fourth_root, k);
    EXPECT_EQ(std::abs(f.real()) + std::abs(f.imag()), 1.0);
    EXPECT_EQ(draw_entry(EntryDist::gaussian_real, k).imag(), 0.0);
  }
}

TEST(SampleMatrix, EmptyIsZero) {
  auto m = sample_matrix(Pattern::empty(Space::index), 6, EntryDist::gaussian_real, 1);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(m(i, j), 0.0);
}

TEST(SampleMatrix, RademacherSupport) {
  auto m = sample_matrix(full_idx(), 2, EntryDist::rademacher, 5);
  EXPECT_TRUE(m.is_real());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(std::abs(m(i, j).real()), 1 / std::numbers::sqrt2);
}

TEST(SampleMatrix, LowerTriangularZeroAboveDiagonal) {
  for (auto d : kAll) {
    auto m = sample_matrix(lower_idx(), 5, d, 3);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        if (j > i) EXPECT_EQ(m(i, j), 0.0);
        else EXPECT_NE(m(i, j), 0.0);
      }
  }
}

TEST(SampleMatrix, DeterministicAndScaled) {
  auto a = sample_matrix(discs_idx(), 300, EntryDist::gaussian_complex, 11);
  auto b = sample_matrix(discs_idx(), 300, EntryDist::gaussian_complex, 11);
  EXPECT_FALSE(a.is_real());
  EXPECT_EQ(a.as_complex(), b.as_complex());
  auto mask = activation_mask(discs_idx(), 300);
  double sum = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < 300; ++i)
    for (std::size_t j = 0; j < 300; ++j) {
      if (!mask[i * 300 + j]) {
        ASSERT_EQ(a(i, j), 0.0);
        continue;
      }
      sum += std::norm(a(i, j));
      ++count;
    }
  EXPECT_NEAR(sum / count * 300, 1.0, 0.02);
  auto c = sample_matrix(discs_idx(), 300, EntryDist::gaussian_complex, 12);
  EXPECT_NE(a.as_complex(), c.as_complex());
}

TEST(WordTrace, Examples) {
  for (std::size_t n : {1u, 3u, 17u}) {
    std::vector<MatrixSample> m{sample_matrix(full_idx(), n, EntryDist::rademacher, n)};
    EXPECT_NEAR(word_trace(m, Word::parse("aA")).real(), 1.0, 1e-12);
  }
  std::vector<MatrixSample> zero{sample_matrix(Pattern::empty(Space::index), 4, EntryDist::gaussian_real, 0)};
  EXPECT_EQ(word_trace(zero, Word::parse("a")), 0.0);
  std::vector<MatrixSample> low{sample_matrix(lower_idx(), 4, EntryDist::rademacher, 2)};
  EXPECT_NEAR(word_trace(low, Word::parse("aA")).real(), 10.0 / 16.0, 1e-12);
}

TEST(WordTrace, MatchesDenseReferenceProduct) {
  std::mt19937_64 rng(19);
  const std::vector<std::string> words = {"a", "aA", "aAa", "aAaAaA", "aaAA", "aAbB", "abAB", "abBAab", "aAaAaAaA",
                                          "abababab", "AAAaaa", "aAbaAb", "abcCBA"};
  for (auto d : kAll) {
    for (const auto& s : words) {
      auto w = Word::parse(s);
      std::vector<MatrixSample> mats;
      for (int l = 0; l < w.letter_count(); ++l)
        mats.push_back(sample_matrix(l % 2 ? lower_idx() : discs_idx(), 23, d, rng()));
      auto got = word_trace(mats, w);
      auto want = reference_trace(mats, w);
      EXPECT_NEAR(got.real(), want.real(), 1e-10) << s << " " << to_string(d);
      EXPECT_NEAR(got.imag(), want.imag(), 1e-10) << s << " " << to_string(d);
    }
  }
}

TEST(WordTrace, Errors) {
  std::vector<MatrixSample> mats{sample_matrix(full_idx(), 3, EntryDist::gaussian_real, 0)};
  EXPECT_THROW(word_trace(mats, Word::parse("aB")), ValidationError);
  mats.push_back(sample_matrix(full_idx(), 4, EntryDist::gaussian_real, 0));
  EXPECT_THROW(word_trace(mats, Word::parse("aB")), ValidationError);
}

TEST(WordTrace, ProbedEstimatorIsClose) {
  std::vector<MatrixSample> mats{sample_matrix(discs_idx(), 200, EntryDist::gaussian_real, 4)};
  auto w = Word::parse("aAaA");
  auto exact = word_trace(mats, w).real();
  auto probed = word_trace_probed(mats, w, 200, 8).real();
  EXPECT_NEAR(probed, exact, 0.05 * exact);
}

TEST(Oracle, Examples) {
  std::vector<Pattern> full{full_idx()};
  for (std::size_t n : {1u, 2u, 7u, 50u, 100u})
    EXPECT_DOUBLE_EQ(exact_moment_oracle(full, Word::parse("aA"), n, EntryDist::rademacher), 1.0) << n;
  EXPECT_EQ(exact_moment_oracle(full, Word::parse("aa"), 3, EntryDist::fourth_root), 0.0);
  std::vector<Pattern> low{lower_idx()};
  EXPECT_DOUBLE_EQ(exact_moment_oracle(low, Word::parse("aA"), 4, EntryDist::rademacher), 10.0 / 16.0);
  EXPECT_THROW(exact_moment_oracle(full, Word::parse("aAaAaA"), 100, EntryDist::rademacher), BudgetError);
}

TEST(Oracle, WishartSecondMomentClosedForm) {
  // (1/N) E Tr((X X*)^2) = 2 + (m4 - 2)/N with m4 = E|z|^4
  std::vector<Pattern> full{full_idx()};
  auto w = Word::parse("aAaA");
  for (std::size_t n : {1u, 2u, 3u, 6u, 11u}) {
    const double inv = 1.0 / static_cast<double>(n);
    EXPECT_NEAR(exact_moment_oracle(full, w, n, EntryDist::gaussian_real), 2 + inv, 1e-12);
    EXPECT_NEAR(exact_moment_oracle(full, w, n, EntryDist::gaussian_complex), 2, 1e-12);
    EXPECT_NEAR(exact_moment_oracle(full, w, n, EntryDist::rademacher), 2 - inv, 1e-12);
    EXPECT_NEAR(exact_moment_oracle(full, w, n, EntryDist::fourth_root), 2 - inv, 1e-12);
  }
}

TEST(Oracle, RealEntriesSeeTransposes) {
  // for real X, E tr(X X) = (1/N^2) sum_ij E[x_ij x_ji] = 1/N (diagonal only)
  std::vector<Pattern> full{full_idx()};
  EXPECT_NEAR(exact_moment_oracle(full, Word::parse("aa"), 5, EntryDist::gaussian_real), 1.0 / 5, 1e-12);
  EXPECT_EQ(exact_moment_oracle(full, Word::parse("aa"), 5, EntryDist::gaussian_complex), 0.0);
}

TEST(Oracle, AgreesWithSampling) {
  struct Case {
    Pattern p;
    std::string w;
    std::size_t n;
    EntryDist d;
  };
  std::vector<Case> cases = {{full_idx(), "aAaA", 3, EntryDist::gaussian_real},
                             {lower_idx(), "aaAA", 4, EntryDist::gaussian_complex},
                             {discs_idx(), "aAAa", 4, EntryDist::rademacher},
                             {lower_idx(), "aAaAaA", 3, EntryDist::fourth_root},
                             {full_idx(), "aa", 2, EntryDist::gaussian_real}};
  for (const auto& c : cases) {
    auto w = Word::parse(c.w);
    std::vector<Pattern> pats{c.p};
    const double exact = exact_moment_oracle(pats, w, c.n, c.d);
    auto emp = empirical_moment(pats, w, c.n, 20000, c.d, 77);
    EXPECT_NEAR(emp.estimate.value, exact, 4 * emp.estimate.std_error + 1e-12) << c.w << " " << to_string(c.d);
  }
}

TEST(Empirical, RademacherFullAAHasNoVariance) {
  std::vector<Pattern> full{full_idx()};
  auto e = empirical_moment(full, Word::parse("aA"), 64, 10, EntryDist::rademacher, 3);
  EXPECT_NEAR(e.estimate.value, 1.0, 1e-12);
  EXPECT_NEAR(e.trial_variance, 0.0, 1e-20);
  EXPECT_EQ(e.estimate.method, Method::empirical);
  EXPECT_EQ(e.estimate.samples, 10u);
}

TEST(Empirical, DeterministicAcrossThreads) {
  std::vector<Pattern> pats{discs_idx(), lower_idx()};
  auto w = Word::parse("aAbBaA");
  EnsembleOptions one, many;
  one.threads = 1;
  many.threads = 3;
  auto a = empirical_moment(pats, w, 60, 12, EntryDist::gaussian_complex, 5, one);
  auto b = empirical_moment(pats, w, 60, 12, EntryDist::gaussian_complex, 5, many);
  EXPECT_EQ(a.estimate.value, b.estimate.value);
  EXPECT_EQ(a.estimate.std_error, b.estimate.std_error);
  EXPECT_EQ(a.imag_mean, b.imag_mean);
}

TEST(Empirical, TriangularAndFullAtModerateSize) {
  std::vector<Pattern> low{lower_idx()}, full{full_idx()};
  auto w = Word::parse("aAaA");
  auto t = empirical_moment(low, w, 400, 20, EntryDist::gaussian_real, 1);
  EXPECT_NEAR(t.estimate.value, 2.0 / 3.0, 3 * t.estimate.std_error + 0.02);
  auto f = empirical_moment(full, w, 400, 20, EntryDist::gaussian_real, 2);
  // finite-N mean is exactly 2 + 1/N for real gaussian entries
  EXPECT_NEAR(f.estimate.value, 2.0 + 1.0 / 400, 4 * f.estimate.std_error);
}

TEST(Spectrum, ZeroMatrix) {
  auto ev = spectrum(Pattern::empty(Space::index), 5, EntryDist::gaussian_real, 0);
  ASSERT_EQ(ev.size(), 5u);
  for (auto z : ev) EXPECT_EQ(std::abs(z), 0.0);
}

TEST(Spectrum, EigenvalueSumEqualsTrace) {
  for (auto d : {EntryDist::gaussian_real, EntryDist::fourth_root}) {
    const std::size_t n = 300;
    auto m = sample_matrix(full_idx(), n, d, 21);
    auto ev = eigenvalues(m);
    std::complex<double> sum = 0, tr = 0;
    for (auto z : ev) sum += z;
    for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
    EXPECT_NEAR(sum.real(), tr.real(), 1e-6 * n);
    EXPECT_NEAR(sum.imag(), tr.imag(), 1e-6 * n);
  }
  EXPECT_THROW(spectrum(full_idx(), 10, EntryDist::gaussian_real, 0, 5), BudgetError);
}
