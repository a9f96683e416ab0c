#include "patmat/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "patmat/errors.hpp"
#include "patmat/parallel.hpp"
#include "patmat/seeding.hpp"

namespace patmat {
namespace {

void require_patterns(const Word& w, std::span<const Pattern> patterns) {
  if (patterns.size() != static_cast<std::size_t>(w.letter_count())) {
    throw ValidationError("expected " + std::to_string(w.letter_count()) + " pattern(s), one per letter, got " +
                          std::to_string(patterns.size()));
  }
  for (const Pattern& p : patterns) {
    if (p.space() != Space::index) throw ValidationError("matrix sampling needs index-space patterns");
  }
}

// Smallest p dividing m such that the word repeats with period p.
std::size_t word_period(const Word& w) {
  const std::size_t m = w.size();
  for (std::size_t p = 1; p < m; ++p) {
    if (m % p != 0) continue;
    bool periodic = true;
    for (std::size_t k = p; k < m && periodic; ++k) periodic = w[k] == w[k - p];
    if (periodic) return p;
  }
  return m;
}

template <class Mat>
Mat factor(const Mat& x, bool starred) {
  if (starred) return x.adjoint();
  return x;
}

// Tr of the product of factors [begin, end).
template <class Mat>
Mat product(const std::vector<const Mat*>& mats, const Word& w, std::size_t begin, std::size_t end) {
  Mat p = factor(*mats[begin], w[begin].starred);
  for (std::size_t k = begin + 1; k < end; ++k) {
    const Mat& x = *mats[k];
    Mat next(p.rows(), x.cols());
    if (w[k].starred) {
      next.noalias() = p * x.adjoint();
    } else {
      next.noalias() = p * x;
    }
    p = std::move(next);
  }
  return p;
}

// Tr(A * B) without forming the product.
template <class Mat>
typename Mat::Scalar trace_of_product(const Mat& a, const Mat& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

template <class Mat>
typename Mat::Scalar trace_word(const std::vector<const Mat*>& mats, const Word& w) {
  const std::size_t m = w.size();
  if (m == 1) return factor(*mats[0], w[0].starred).trace();
  const std::size_t period = word_period(w);
  const std::size_t reps = m / period;
  if (reps == 1) {
    const Mat head = product(mats, w, 0, m - 1);
    const Mat& last = *mats[m - 1];
    if (w[m - 1].starred) return head.cwiseProduct(last.conjugate()).sum();
    return trace_of_product(head, last);
  }
  // Periodic word B^reps: form B once and power it.
  const Mat block = product(mats, w, 0, period);
  Mat power = block;
  for (std::size_t r = 2; r < reps; ++r) {
    Mat next(power.rows(), block.cols());
    next.noalias() = power * block;
    power = std::move(next);
  }
  return trace_of_product(power, block);
}

template <class Mat>
std::vector<const Mat*> letters_as(std::span<const MatrixSample> by_letter, const Word& w,
                                   std::vector<Mat>& promoted) {
  promoted.clear();
  promoted.reserve(by_letter.size());
  std::vector<const Mat*> out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const MatrixSample& s = by_letter[static_cast<std::size_t>(w[k].letter)];
    if (const Mat* direct = std::get_if<Mat>(&s.entries)) {
      out.push_back(direct);
    } else {
      out.push_back(nullptr);
    }
  }
  if constexpr (std::is_same_v<Mat, ComplexMatrix>) {
    std::vector<int> slot(by_letter.size(), -1);
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (out[k] != nullptr) continue;
      const auto l = static_cast<std::size_t>(w[k].letter);
      if (slot[l] < 0) {
        slot[l] = static_cast<int>(promoted.size());
        promoted.push_back(by_letter[l].as_complex());
      }
    }
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (out[k] == nullptr) out[k] = &promoted[static_cast<std::size_t>(slot[static_cast<std::size_t>(w[k].letter)])];
    }
  }
  return out;
}

void require_assignment(std::span<const MatrixSample> by_letter, const Word& w) {
  if (by_letter.size() < static_cast<std::size_t>(w.letter_count())) {
    throw ValidationError("missing matrix for letter " + std::to_string(by_letter.size()));
  }
  for (const MatrixSample& s : by_letter) {
    if (s.size != by_letter.front().size) throw ValidationError("matrix size mismatch across letters");
  }
  if (by_letter.front().size == 0) throw ValidationError("matrix size must be >= 1");
}

bool all_real(std::span<const MatrixSample> by_letter, const Word& w) {
  for (const Symbol& s : w.symbols()) {
    if (!by_letter[static_cast<std::size_t>(s.letter)].is_real()) return false;
  }
  return true;
}

double double_factorial(unsigned k) {
  double r = 1.0;
  for (unsigned j = k; j > 1; j -= 2) r *= j;
  return r;
}

}  // namespace

EntryDist parse_entry_dist(std::string_view name) {
  if (name == "gaussian-real") return EntryDist::gaussian_real;
  if (name == "gaussian-complex") return EntryDist::gaussian_complex;
  if (name == "rademacher") return EntryDist::rademacher;
  if (name == "fourth-root") return EntryDist::fourth_root;
  throw ValidationError("unknown entry distribution '" + std::string(name) +
                        "' (gaussian-real, gaussian-complex, rademacher, fourth-root)");
}

std::string_view to_string(EntryDist dist) noexcept {
  switch (dist) {
    case EntryDist::gaussian_real: return "gaussian-real";
    case EntryDist::gaussian_complex: return "gaussian-complex";
    case EntryDist::rademacher: return "rademacher";
    case EntryDist::fourth_root: return "fourth-root";
  }
  return "unknown";
}

bool is_real(EntryDist dist) noexcept {
  return dist == EntryDist::gaussian_real || dist == EntryDist::rademacher;
}

double entry_moment(EntryDist dist, unsigned p, unsigned q) {
  switch (dist) {
    case EntryDist::rademacher: return (p + q) % 2 == 0 ? 1.0 : 0.0;
    case EntryDist::gaussian_real:
      if (p + q == 0) return 1.0;
      return (p + q) % 2 == 0 ? double_factorial(p + q - 1) : 0.0;
    case EntryDist::fourth_root: {
      const int d = static_cast<int>(p) - static_cast<int>(q);
      return ((d % 4) + 4) % 4 == 0 ? 1.0 : 0.0;
    }
    case EntryDist::gaussian_complex: {
      if (p != q) return 0.0;
      double f = 1.0;
      for (unsigned j = 2; j <= p; ++j) f *= j;
      return f;
    }
  }
  return 0.0;
}

std::complex<double> draw_entry(EntryDist dist, std::uint64_t key) noexcept {
  CounterRng rng(key);
  switch (dist) {
    case EntryDist::gaussian_real: return {rng.normal(), 0.0};
    case EntryDist::gaussian_complex: {
      double a;
      double b;
      rng.normal_pair(a, b);
      constexpr double half_root = 1.0 / std::numbers::sqrt2;
      return {a * half_root, b * half_root};
    }
    case EntryDist::rademacher: return {(rng.next() >> 63) != 0 ? 1.0 : -1.0, 0.0};
    case EntryDist::fourth_root: {
      switch (rng.next() >> 62) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
      }
    }
  }
  return {};
}

std::complex<double> MatrixSample::operator()(std::size_t i, std::size_t j) const {
  if (const auto* r = std::get_if<RealMatrix>(&entries)) {
    return {(*r)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), 0.0};
  }
  return std::get<ComplexMatrix>(entries)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

ComplexMatrix MatrixSample::as_complex() const {
  if (const auto* r = std::get_if<RealMatrix>(&entries)) return r->cast<std::complex<double>>();
  return std::get<ComplexMatrix>(entries);
}

MatrixSample sample_matrix(std::span<const std::uint8_t> mask, std::size_t n, EntryDist dist, std::uint64_t seed) {
  if (n == 0) throw ValidationError("matrix size must be >= 1");
  if (mask.size() != n * n) throw ValidationError("activation mask must have N*N cells");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const auto en = static_cast<Eigen::Index>(n);
  MatrixSample s;
  s.size = n;
  s.dist = dist;
  if (is_real(dist)) {
    RealMatrix m = RealMatrix::Zero(en, en);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (mask[i * n + j] == 0) continue;
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            scale * draw_entry(dist, derive_seed(seed, {i, j})).real();
      }
    }
    s.entries = std::move(m);
  } else {
    ComplexMatrix m = ComplexMatrix::Zero(en, en);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (mask[i * n + j] == 0) continue;
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            scale * draw_entry(dist, derive_seed(seed, {i, j}));
      }
    }
    s.entries = std::move(m);
  }
  return s;
}

MatrixSample sample_matrix(const Pattern& index_pattern, std::size_t n, EntryDist dist, std::uint64_t seed,
                           unsigned supersample) {
  if (index_pattern.space() != Space::index) throw ValidationError("matrix sampling needs an index-space pattern");
  if (n == 0) throw ValidationError("matrix size must be >= 1");
  const auto mask = activation_mask(index_pattern, n, supersample);
  return sample_matrix(mask, n, dist, seed);
}

std::complex<double> word_trace(std::span<const MatrixSample> by_letter, const Word& w) {
  require_assignment(by_letter, w);
  const double n = static_cast<double>(by_letter.front().size);
  if (all_real(by_letter, w)) {
    std::vector<RealMatrix> unused;
    const auto mats = letters_as<RealMatrix>(by_letter, w, unused);
    return {trace_word(mats, w) / n, 0.0};
  }
  std::vector<ComplexMatrix> promoted;
  const auto mats = letters_as<ComplexMatrix>(by_letter, w, promoted);
  return trace_word(mats, w) / n;
}

std::complex<double> word_trace_probed(std::span<const MatrixSample> by_letter, const Word& w, std::size_t probes,
                                       std::uint64_t seed) {
  require_assignment(by_letter, w);
  if (probes == 0) throw ValidationError("probe count must be >= 1");
  const std::size_t n = by_letter.front().size;
  std::vector<ComplexMatrix> promoted;
  const auto mats = letters_as<ComplexMatrix>(by_letter, w, promoted);
  std::complex<double> acc = 0.0;
  for (std::size_t p = 0; p < probes; ++p) {
    Eigen::VectorXcd z(static_cast<Eigen::Index>(n));
    CounterRng rng(derive_seed(seed, {p}));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = (rng.next() >> 63) != 0 ? 1.0 : -1.0;
    Eigen::VectorXcd v = z;
    for (std::size_t k = w.size(); k-- > 0;) {
      Eigen::VectorXcd next = w[k].starred ? Eigen::VectorXcd(mats[k]->adjoint() * v) : Eigen::VectorXcd(*mats[k] * v);
      v = std::move(next);
    }
    acc += z.dot(v);
  }
  return acc / (static_cast<double>(probes) * static_cast<double>(n));
}

EmpiricalMoment empirical_moment(std::span<const Pattern> patterns, const Word& w, std::size_t n,
                                 std::size_t trials, EntryDist dist, std::uint64_t seed,
                                 const EnsembleOptions& options) {
  require_patterns(w, patterns);
  if (n == 0) throw ValidationError("matrix size must be >= 1");
  if (trials == 0) throw ValidationError("need at least one trial");
  std::vector<std::vector<std::uint8_t>> masks;
  masks.reserve(patterns.size());
  for (const Pattern& p : patterns) masks.push_back(activation_mask(p, n, options.supersample));

  std::vector<double> re(trials);
  std::vector<double> im(trials);
  parallel_for(trials, options.threads, [&](std::size_t t) {
    std::vector<MatrixSample> mats;
    mats.reserve(masks.size());
    for (std::size_t l = 0; l < masks.size(); ++l) {
      mats.push_back(sample_matrix(masks[l], n, dist, derive_seed(seed, {t, l})));
    }
    const std::complex<double> tr = options.probes == 0
                                        ? word_trace(mats, w)
                                        : word_trace_probed(mats, w, options.probes, derive_seed(seed, {t, ~0ULL}));
    re[t] = tr.real();
    im[t] = tr.imag();
  });

  EmpiricalMoment out;
  out.estimate = summarize(re, Method::empirical);
  out.trial_variance = sample_variance(re);
  out.imag_mean = summarize(im, Method::empirical).value;
  if (!std::isfinite(out.estimate.value)) throw NumericalError("empirical moment is not finite");
  return out;
}

double exact_moment_oracle(std::span<const Pattern> patterns, const Word& w, std::size_t n, EntryDist dist,
                           double budget, unsigned supersample) {
  require_patterns(w, patterns);
  if (n == 0) throw ValidationError("matrix size must be >= 1");
  const std::size_t m = w.size();
  if (std::pow(static_cast<double>(n), static_cast<double>(m)) > budget) {
    throw BudgetError("oracle needs N^m = " + std::to_string(n) + "^" + std::to_string(m) +
                      " terms, above the budget");
  }
  std::vector<std::vector<std::uint8_t>> masks;
  for (const Pattern& p : patterns) masks.push_back(activation_mask(p, n, supersample));

  struct Use {
    int letter;
    std::size_t row;
    std::size_t col;
    unsigned p;
    unsigned q;
  };
  std::vector<std::size_t> idx(m, 0);
  std::vector<Use> uses;
  uses.reserve(m);
  long double total = 0.0L;
  while (true) {
    uses.clear();
    bool active = true;
    for (std::size_t k = 0; k < m && active; ++k) {
      const std::size_t from = idx[k];
      const std::size_t to = idx[(k + 1) % m];
      const bool st = w[k].starred;
      const std::size_t row = st ? to : from;
      const std::size_t col = st ? from : to;
      const int letter = w[k].letter;
      if (masks[static_cast<std::size_t>(letter)][row * n + col] == 0) {
        active = false;
        break;
      }
      auto it = std::find_if(uses.begin(), uses.end(), [&](const Use& u) {
        return u.letter == letter && u.row == row && u.col == col;
      });
      if (it == uses.end()) {
        uses.push_back(Use{letter, row, col, 0, 0});
        it = uses.end() - 1;
      }
      (st ? it->q : it->p) += 1;
    }
    if (active) {
      long double term = 1.0L;
      for (const Use& u : uses) {
        term *= entry_moment(dist, u.p, u.q);
        if (term == 0.0L) break;
      }
      total += term;
    }
    std::size_t k = 0;
    while (k < m && idx[k] == n - 1) idx[k++] = 0;
    if (k == m) break;
    ++idx[k];
  }
  const long double norm = std::pow(static_cast<long double>(n), static_cast<long double>(m) / 2.0L + 1.0L);
  return static_cast<double>(total / norm);
}

std::vector<std::complex<double>> eigenvalues(const MatrixSample& s) {
  std::vector<std::complex<double>> out;
  if (const auto* r = std::get_if<RealMatrix>(&s.entries)) {
    Eigen::EigenSolver<RealMatrix> solver(*r, false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
  } else {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(std::get<ComplexMatrix>(s.entries), false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
  }
  return out;
}

std::vector<std::complex<double>> spectrum(const Pattern& index_pattern, std::size_t n, EntryDist dist,
                                           std::uint64_t seed, std::size_t max_size, unsigned supersample) {
  if (n > max_size) {
    throw BudgetError("spectrum size " + std::to_string(n) + " exceeds the eigensolver budget of " +
                      std::to_string(max_size));
  }
  return eigenvalues(sample_matrix(index_pattern, n, dist, seed, supersample));
}

}  // namespace patmat
