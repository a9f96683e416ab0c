#include "patmat/paths.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "patmat/errors.hpp"

namespace patmat {
namespace {

std::pair<int, int> edge_set(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

// The matrix cell a symbol reads: X[a][b] for an unstarred edge a->b, and
// X[b][a] (conjugated) for a starred one.
std::pair<int, int> variable_cell(int from, int to, bool starred) {
  return starred ? std::pair{to, from} : std::pair{from, to};
}

void require_patterns(const Word& w, std::span<const Pattern> patterns) {
  if (patterns.size() != static_cast<std::size_t>(w.letter_count())) {
    throw ValidationError("expected " + std::to_string(w.letter_count()) + " pattern(s), one per letter, got " +
                          std::to_string(patterns.size()));
  }
  for (const Pattern& p : patterns) {
    if (p.space() != Space::index) throw ValidationError("path counting needs index-space patterns");
  }
}

bool has_duplicate(std::span<const double> x) {
  std::vector<std::uint64_t> bits(x.size());
  std::transform(x.begin(), x.end(), bits.begin(), [](double v) { return std::bit_cast<std::uint64_t>(v); });
  std::sort(bits.begin(), bits.end());
  return std::adjacent_find(bits.begin(), bits.end()) != bits.end();
}

}  // namespace

PathFn::PathFn(std::vector<int> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw ValidationError("a path needs at least one edge");
  if (values_.front() != values_.back()) throw ValidationError("path must be closed: i(1) == i(m+1)");
  for (int v : values_) {
    if (v < 1) throw ValidationError("path colors are 1-based");
  }
}

int PathFn::color_count() const {
  std::set<int> colors(values_.begin(), values_.end());
  return static_cast<int>(colors.size());
}

std::string PathFn::render() const {
  std::string out;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (k != 0) out.push_back(',');
    out += std::to_string(values_[k]);
  }
  return out;
}

std::optional<std::size_t> find_strict_wedge(const PathFn& p, const Word& w) {
  const std::size_t m = p.length();
  if (w.size() != m) throw ValidationError("path length does not match word length");
  std::map<std::pair<int, int>, int> count;
  for (std::size_t k = 0; k < m; ++k) ++count[edge_set(p[k], p[k + 1])];
  for (std::size_t k = 0; k + 2 <= m; ++k) {
    if (p[k] == p[k + 2] && count[edge_set(p[k], p[k + 1])] == 2) return k;
  }
  return std::nullopt;
}

PathFn remove_wedge(const PathFn& p, std::size_t k) {
  if (k + 2 > p.length() || p[k] != p[k + 2]) throw ValidationError("no wedge at the given position");
  std::vector<int> v;
  v.reserve(p.values().size() - 2);
  for (std::size_t j = 0; j < p.values().size(); ++j) {
    if (j != k + 1 && j != k + 2) v.push_back(p[j]);
  }
  return PathFn(std::move(v));
}

PathClass classify_path(const PathFn& p, const Word& w) {
  const std::size_t m = p.length();
  if (w.size() != m) throw ValidationError("path length does not match word length");

  PathClass cls;
  std::map<std::pair<int, int>, int> count;
  for (std::size_t k = 0; k < m; ++k) ++count[edge_set(p[k], p[k + 1])];
  cls.social = std::all_of(count.begin(), count.end(), [](const auto& e) { return e.second >= 2; });
  cls.pairing = cls.social && std::all_of(count.begin(), count.end(), [](const auto& e) { return e.second % 2 == 0; });
  cls.strict_pairing = cls.social && std::all_of(count.begin(), count.end(), [](const auto& e) { return e.second == 2; });

  // A polar matching exists iff every (letter, cell) has as many unstarred as
  // starred uses.
  std::map<std::tuple<int, int, int>, int> balance;
  for (std::size_t k = 0; k < m; ++k) {
    const auto [r, c] = variable_cell(p[k], p[k + 1], w[k].starred);
    balance[{w[k].letter, r, c}] += w[k].starred ? -1 : 1;
  }
  cls.polar_paired = cls.pairing &&
                     std::all_of(balance.begin(), balance.end(), [](const auto& e) { return e.second == 0; });
  cls.color_count = p.color_count();
  cls.strict_wedge_at = find_strict_wedge(p, w);
  cls.constraint = m % 2 == 0 && cls.strict_pairing && cls.polar_paired &&
                   cls.color_count == static_cast<int>(m / 2 + 1);
  return cls;
}

namespace {

struct ShapeSearch {
  const Word& w;
  std::size_t m;
  int colors;
  std::vector<int> values;
  std::vector<int> edge_count;        // colors x colors, by edge set
  std::vector<std::size_t> first_use;  // edge set -> first edge index
  std::vector<Shape> out;
  std::vector<int> stack{1};  // root-to-current chain of colors

  int& count_of(int a, int b) {
    const auto [lo, hi] = edge_set(a, b);
    return edge_count[static_cast<std::size_t>((lo - 1) * colors + (hi - 1))];
  }
  std::size_t& first_of(int a, int b) {
    const auto [lo, hi] = edge_set(a, b);
    return first_use[static_cast<std::size_t>((lo - 1) * colors + (hi - 1))];
  }

  // Whether edge k (values[k] -> values[k+1]) may be the second use of its
  // edge set, given the first use at edge j.
  bool polar_match(std::size_t j, std::size_t k) const {
    if (w[j].letter != w[k].letter || w[j].starred == w[k].starred) return false;
    return variable_cell(values[j], values[j + 1], w[j].starred) ==
           variable_cell(values[k], values[k + 1], w[k].starred);
  }

  // Places edge k = pos - 1 ending at values[pos]; returns false if pruned.
  bool push_edge(std::size_t pos) {
    const std::size_t k = pos - 1;
    int& c = count_of(values[k], values[pos]);
    if (c == 2) return false;
    if (c == 1 && !polar_match(first_of(values[k], values[pos]), k)) return false;
    if (c == 0) first_of(values[k], values[pos]) = k;
    ++c;
    return true;
  }
  void pop_edge(std::size_t pos) { --count_of(values[pos - 1], values[pos]); }

  void finish() {
    PathFn path(values);
    if (!classify_path(path, w).constraint) return;
    Shape s{path, {}, {}};
    std::vector<std::size_t> first(edge_count.size(), m);
    for (std::size_t k = 0; k < m; ++k) {
      const auto [lo, hi] = edge_set(values[k], values[k + 1]);
      const auto slot = static_cast<std::size_t>((lo - 1) * colors + (hi - 1));
      if (first[slot] == m) {
        first[slot] = k;
        continue;
      }
      const std::size_t j = first[slot];
      const std::size_t u = w[j].starred ? k : j;
      const std::size_t st = w[j].starred ? j : k;
      s.pairs.push_back(EdgePair{u, st});
      const auto [r, c] = variable_cell(values[u], values[u + 1], false);
      s.cells.push_back(CellConstraint{w[u].letter, r, c});
    }
    out.push_back(std::move(s));
  }

  // n distinct edge sets joining n + 1 colors form a tree, so the walk is a
  // depth-first traversal: every step either opens a fresh color or returns
  // to the parent of the current one.
  void extend(std::size_t pos, int used) {
    if (pos == m) {
      values[m] = 1;
      if (used == colors && stack.size() == 2 && push_edge(m)) {
        finish();
        pop_edge(m);
      }
      return;
    }
    if (colors - used > static_cast<int>(m - pos)) return;
    if (used < colors) {
      values[pos] = used + 1;
      if (push_edge(pos)) {
        stack.push_back(used + 1);
        extend(pos + 1, used + 1);
        stack.pop_back();
        pop_edge(pos);
      }
    }
    if (stack.size() >= 2) {
      const int here = stack.back();
      values[pos] = stack[stack.size() - 2];
      if (push_edge(pos)) {
        stack.pop_back();
        extend(pos + 1, used);
        stack.push_back(here);
        pop_edge(pos);
      }
    }
  }
};

}  // namespace

std::vector<Shape> enumerate_shapes(const Word& w, std::size_t max_word_length) {
  if (w.size() > max_word_length) {
    throw BudgetError("combinatorial blowup: word length " + std::to_string(w.size()) + " exceeds the cap of " +
                      std::to_string(max_word_length));
  }
  if (!is_even_balanced(w)) return {};
  const std::size_t m = w.size();
  const int colors = static_cast<int>(m / 2 + 1);
  ShapeSearch search{w, m, colors, std::vector<int>(m + 1, 1),
                     std::vector<int>(static_cast<std::size_t>(colors * colors), 0),
                     std::vector<std::size_t>(static_cast<std::size_t>(colors * colors), 0), {}, {1}};
  search.extend(1, 1);
  return std::move(search.out);
}

PathCounter::PathCounter(std::vector<Shape> shapes, const Word& w, std::vector<Pattern> patterns)
    : word_(w), patterns_(std::move(patterns)), dimension_(w.size() % 2 == 0 ? w.size() / 2 + 1 : 0) {
  require_patterns(w, patterns_);
  for (const Shape& s : shapes) {
    if (s.path.length() != w.size()) throw ValidationError("shape does not belong to this word");
    Plan plan;
    plan.checks_by_color.resize(dimension_);
    for (const CellConstraint& c : s.cells) {
      const int later = std::max(c.row_color, c.col_color) - 1;
      plan.checks_by_color[static_cast<std::size_t>(later)].push_back(
          Check{c.letter, c.row_color - 1, c.col_color - 1});
    }
    plans_.push_back(std::move(plan));
  }
}

std::uint64_t PathCounter::count_plan(const Plan& plan, const std::vector<std::uint8_t>& member) const {
  const std::size_t k = dimension_;
  std::vector<int> assign(k, -1);
  std::uint64_t total = 0;
  auto ok = [&](std::size_t color) {
    for (const Check& c : plan.checks_by_color[color]) {
      const auto a = static_cast<std::size_t>(assign[static_cast<std::size_t>(c.row)]);
      const auto b = static_cast<std::size_t>(assign[static_cast<std::size_t>(c.col)]);
      if (member[(static_cast<std::size_t>(c.letter) * k + a) * k + b] == 0) return false;
    }
    return true;
  };
  auto place = [&](auto&& self, std::size_t color, std::uint64_t used) -> void {
    if (color == k) {
      ++total;
      return;
    }
    for (std::size_t t = 0; t < k; ++t) {
      if ((used >> t) & 1u) continue;
      assign[color] = static_cast<int>(t);
      if (ok(color)) self(self, color + 1, used | (std::uint64_t{1} << t));
    }
  };
  place(place, 0, 0);
  return total;
}

std::uint64_t PathCounter::operator()(std::span<const double> x) const {
  if (plans_.empty()) return 0;
  if (x.size() != dimension_) {
    throw ValidationError("path counting function expects " + std::to_string(dimension_) + " coordinates, got " +
                          std::to_string(x.size()));
  }
  if (has_duplicate(x)) return 0;
  const std::size_t k = dimension_;
  std::vector<std::uint8_t> member(patterns_.size() * k * k, 0);
  for (std::size_t l = 0; l < patterns_.size(); ++l) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (a != b) member[(l * k + a) * k + b] = patterns_[l].contains(x[a], x[b]) ? 1 : 0;
      }
    }
  }
  std::uint64_t total = 0;
  for (const Plan& plan : plans_) total += count_plan(plan, member);
  return total;
}

std::uint64_t f_eval(std::span<const Shape> shapes, const Word& w, std::span<const Pattern> patterns,
                     std::span<const double> x) {
  PathCounter counter(std::vector<Shape>(shapes.begin(), shapes.end()), w,
                      std::vector<Pattern>(patterns.begin(), patterns.end()));
  if (w.size() % 2 == 0 && x.size() != counter.dimension()) {
    throw ValidationError("dimension mismatch: word of length " + std::to_string(w.size()) + " needs " +
                          std::to_string(counter.dimension()) + " coordinates");
  }
  return counter(x);
}

void for_each_closed_path(std::size_t length, int colors, const std::function<void(const PathFn&)>& visit) {
  if (length == 0 || colors < 1) return;
  std::vector<int> v(length + 1, 1);
  while (true) {
    v[length] = v[0];
    visit(PathFn(v));
    std::size_t k = 0;
    while (k < length && v[k] == colors) v[k++] = 1;
    if (k == length) return;
    ++v[k];
  }
}

std::vector<PathFn> naive_constraint_paths(const Word& w) {
  if (w.size() % 2 != 0) return {};
  const std::size_t n = w.size() / 2;
  if (n > 4) throw BudgetError("brute-force path enumeration refuses n > 4");
  std::vector<PathFn> out;
  for_each_closed_path(w.size(), static_cast<int>(n + 1), [&](const PathFn& p) {
    if (classify_path(p, w).constraint) out.push_back(p);
  });
  return out;
}

std::uint64_t f_naive(std::span<const PathFn> constraint_paths, const Word& w, std::span<const Pattern> patterns,
                      std::span<const double> x) {
  require_patterns(w, patterns);
  if (w.size() % 2 != 0) return 0;
  if (x.size() != w.size() / 2 + 1) throw ValidationError("dimension mismatch");
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      if (std::bit_cast<std::uint64_t>(x[a]) == std::bit_cast<std::uint64_t>(x[b])) return 0;
    }
  }
  std::uint64_t total = 0;
  for (const PathFn& p : constraint_paths) {
    bool inside = true;
    for (std::size_t k = 0; k < w.size() && inside; ++k) {
      const double from = x[static_cast<std::size_t>(p[k] - 1)];
      const double to = x[static_cast<std::size_t>(p[k + 1] - 1)];
      const Pattern& pat = patterns[static_cast<std::size_t>(w[k].letter)];
      inside = w[k].starred ? pat.contains(to, from) : pat.contains(from, to);
    }
    if (inside) ++total;
  }
  return total;
}

std::uint64_t f_naive(const Word& w, std::span<const Pattern> patterns, std::span<const double> x) {
  const auto paths = naive_constraint_paths(w);
  return f_naive(paths, w, patterns, x);
}

std::vector<ClassifiedPath> naive_paths(const Word& w, int colors, double budget) {
  if (colors < 1) throw ValidationError("need at least one color");
  if (std::pow(static_cast<double>(colors), static_cast<double>(w.size())) > budget) {
    throw BudgetError("naive path enumeration exceeds the budget of " + std::to_string(budget) + " paths");
  }
  std::vector<ClassifiedPath> out;
  for_each_closed_path(w.size(), colors, [&](const PathFn& p) { out.push_back({p, classify_path(p, w)}); });
  return out;
}

}  // namespace patmat
