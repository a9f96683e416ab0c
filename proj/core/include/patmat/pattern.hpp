#pragma once

// Patterns: subsets of the unit square built from primitive leaves and
// boolean combinations, with point membership and matrix-cell activation.
//
// Two coordinate conventions exist. Picture space is the usual drawing
// convention (x to the right, y upwards). Index space is the convention in
// which the first coordinate is the matrix row and the second the column,
// both growing from 0 at the top-left corner. A picture-space pattern S and
// its index-space form P are related by P(r, c) <=> S(c, 1 - r).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "patmat/moment_estimate.hpp"

namespace patmat {

enum class Space { picture, index };

std::string_view to_string(Space space) noexcept;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

class Pattern;

namespace shape {

// Leaf coordinates are (first, second) coordinates in the owning pattern's
// space; in picture space that is (x, y), in index space (row, col).
struct Disc {
  double cx;
  double cy;
  double r;
};
struct Rect {
  double x0;
  double y0;
  double x1;
  double y1;
};
/// a * first + b * second <= c
struct HalfPlane {
  double a;
  double b;
  double c;
};
struct Polygon {
  std::vector<Point> vertices;
};
/// Row-major cell grid. Row 0 is the top of a picture-space bitmap and the
/// first matrix row of an index-space one; both describe the same image.
struct Bitmap {
  std::size_t width;
  std::size_t height;
  std::vector<std::uint8_t> cells;
};
struct Full {};
struct Empty {};
struct Union {
  std::vector<Pattern> parts;
};
struct Intersect {
  std::vector<Pattern> parts;
};
struct Complement {
  std::vector<Pattern> parts;  // exactly one
};
struct Difference {
  std::vector<Pattern> parts;  // exactly two: minuend, subtrahend
};

using Node = std::variant<Disc, Rect, HalfPlane, Polygon, Bitmap, Full, Empty, Union, Intersect,
                          Complement, Difference>;

}  // namespace shape

/// Immutable pattern expression. Copies share the tree; membership queries
/// are pure and safe to call concurrently.
class Pattern {
public:
  static Pattern disc(double cx, double cy, double r, Space space = Space::picture);
  static Pattern rect(double x0, double y0, double x1, double y1, Space space = Space::picture);
  static Pattern half_plane(double a, double b, double c, Space space = Space::picture);
  static Pattern polygon(std::vector<Point> vertices, Space space = Space::picture);
  static Pattern bitmap(std::size_t width, std::size_t height, std::vector<std::uint8_t> cells,
                        Space space = Space::picture);
  static Pattern full(Space space = Space::picture);
  static Pattern empty(Space space = Space::picture);

  static Pattern unite(std::vector<Pattern> parts);
  static Pattern intersect(std::vector<Pattern> parts);
  static Pattern complement(Pattern part);
  static Pattern difference(Pattern minuend, Pattern subtrahend);

  Space space() const noexcept { return space_; }
  const shape::Node& node() const noexcept { return *node_; }

  /// Membership under the pattern's own coordinate space. Leaves are closed
  /// sets (<= comparisons); Complement is plain negation.
  bool contains(double first, double second) const noexcept;

  bool is_full() const noexcept;
  bool is_empty() const noexcept;

private:
  Pattern(std::shared_ptr<const shape::Node> node, Space space) : node_(std::move(node)), space_(space) {}

  static Pattern make(shape::Node node, Space space);

  std::shared_ptr<const shape::Node> node_;
  Space space_;
};

inline bool contains(const Pattern& p, double first, double second) noexcept {
  return p.contains(first, second);
}

/// Measure-preserving flip (x, y) -> (1 - y, x) applied leaf by leaf.
/// Requires a picture-space pattern.
Pattern to_index_space(const Pattern& picture);

/// Inverse of to_index_space. Requires an index-space pattern.
Pattern to_picture_space(const Pattern& index);

/// Entry (i, j) of the N x N approximating matrix is active when the centre
/// ((i - 0.5)/N, (j - 0.5)/N) lies in the index-space pattern. With
/// supersample k > 1 the cell is probed on a k x k grid of sub-cell centres
/// and is active if any probe is inside. i and j are 1-based.
bool cell_active(const Pattern& index_pattern, std::size_t n, std::size_t i, std::size_t j,
                 unsigned supersample = 1);

/// Row-major N x N activation mask (1 = active), 0-based rows and columns.
std::vector<std::uint8_t> activation_mask(const Pattern& index_pattern, std::size_t n,
                                          unsigned supersample = 1);

/// Monte-Carlo area over the unit square, deterministic in `seed`.
MomentEstimate area_mc(const Pattern& p, std::size_t samples, std::uint64_t seed,
                       unsigned threads = 0);

/// Named fixed patterns in picture space: full, empty, lower-triangular,
/// upper-triangular, three-discs.
Pattern preset(std::string_view name);
bool is_preset(std::string_view name) noexcept;
std::vector<std::string> preset_names();

}  // namespace patmat
