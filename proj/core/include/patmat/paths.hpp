#pragma once

// Index paths of the trace expansion and the path-counting function.
//
// A path of length m is a closed sequence of colors i(0), ..., i(m) with
// i(0) == i(m); its k-th edge {i(k), i(k+1)} carries the k-th symbol of the
// word. Colors are 1-based, positions 0-based.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patmat/pattern.hpp"
#include "patmat/words.hpp"

namespace patmat {

class PathFn {
public:
  /// Requires at least two values, all >= 1, and values.front() == values.back().
  explicit PathFn(std::vector<int> values);

  std::size_t length() const noexcept { return values_.size() - 1; }
  int operator[](std::size_t k) const noexcept { return values_[k]; }
  const std::vector<int>& values() const noexcept { return values_; }
  int color_count() const;

  /// "1,2,1"
  std::string render() const;

  friend bool operator==(const PathFn&, const PathFn&) = default;

private:
  std::vector<int> values_;
};

struct PathClass {
  bool social = false;          // every edge set occurs at least twice
  bool pairing = false;         // ... an even number of times
  bool strict_pairing = false;  // ... exactly twice
  /// Paired, and the symbols can be matched so that each unstarred use of a
  /// variable meets a starred use of the same variable (same letter, same
  /// matrix cell): unstarred a->b pairs with starred b->a.
  bool polar_paired = false;
  int color_count = 0;
  std::optional<std::size_t> strict_wedge_at;
  /// Strictly polar paired, even length 2n, exactly n + 1 colors.
  bool constraint = false;
};

PathClass classify_path(const PathFn& p, const Word& w);

/// Smallest k with i(k) == i(k+2) whose edge {i(k), i(k+1)} occurs only at
/// positions k and k+1.
std::optional<std::size_t> find_strict_wedge(const PathFn& p, const Word& w);

/// Removes positions k+1 and k+2 of a path with a wedge at k.
PathFn remove_wedge(const PathFn& p, std::size_t k);

/// Two edges of a shape that use the same random variable.
struct EdgePair {
  std::size_t unstarred_edge;
  std::size_t starred_edge;
};

/// The single membership test a pair imposes: (x[row], x[col]) in P[letter].
struct CellConstraint {
  int letter;
  int row_color;
  int col_color;
};

/// A constraint path up to relabelling of colors, in first-appearance order
/// (colors 1..n+1 appear in increasing order of first use).
struct Shape {
  PathFn path;
  std::vector<EdgePair> pairs;
  std::vector<CellConstraint> cells;
};

inline constexpr std::size_t kDefaultWordCap = 12;

/// All canonical constraint paths of `w`, deterministic lexicographic order.
/// Empty for odd or star-imbalanced words. Throws BudgetError for words
/// longer than `max_word_length`.
std::vector<Shape> enumerate_shapes(const Word& w, std::size_t max_word_length = kDefaultWordCap);

/// The path-counting function for one word and per-letter index-space
/// patterns, compiled once and evaluated at many points.
class PathCounter {
public:
  PathCounter(std::vector<Shape> shapes, const Word& w, std::vector<Pattern> patterns);

  /// Number of labelled constraint paths whose edges land in the patterns at
  /// coordinates x (one coordinate per color). Zero if two coordinates are
  /// bitwise equal.
  std::uint64_t operator()(std::span<const double> x) const;

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t shape_count() const noexcept { return plans_.size(); }
  const Word& word() const noexcept { return word_; }

private:
  struct Check {
    int letter;
    int row;  // 0-based color
    int col;
  };
  struct Plan {
    // checks_by_color[c] are the tests that become decidable once colors
    // 0..c are placed.
    std::vector<std::vector<Check>> checks_by_color;
  };

  std::uint64_t count_plan(const Plan& plan, const std::vector<std::uint8_t>& member) const;

  Word word_;
  std::vector<Pattern> patterns_;
  std::vector<Plan> plans_;
  std::size_t dimension_;
};

/// One-shot evaluation of the path-counting function.
std::uint64_t f_eval(std::span<const Shape> shapes, const Word& w, std::span<const Pattern> patterns,
                     std::span<const double> x);

/// Brute-force list of every labelled constraint path [2n+1] -> [n+1] of `w`,
/// found by classifying all (n+1)^(2n) closed maps. Refuses n > 4.
std::vector<PathFn> naive_constraint_paths(const Word& w);

/// Brute-force path-counting function: checks the membership rule edge by
/// edge on every path from naive_constraint_paths (or the supplied list).
std::uint64_t f_naive(const Word& w, std::span<const Pattern> patterns, std::span<const double> x);
std::uint64_t f_naive(std::span<const PathFn> constraint_paths, const Word& w,
                      std::span<const Pattern> patterns, std::span<const double> x);

/// Visits every closed map [m+1] -> [colors], in odometer order.
void for_each_closed_path(std::size_t length, int colors, const std::function<void(const PathFn&)>& visit);

struct ClassifiedPath {
  PathFn path;
  PathClass cls;
};

/// All closed maps with their classes. Refuses colors^m > budget.
std::vector<ClassifiedPath> naive_paths(const Word& w, int colors, double budget = 1e7);

}  // namespace patmat
