#include "patmat/pattern.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#include "patmat/errors.hpp"
#include "patmat/parallel.hpp"
#include "patmat/seeding.hpp"

namespace patmat {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_unit(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ValidationError(std::string(what) + " coordinate " + std::to_string(v) +
                          " is outside [0, 1]");
  }
}

bool on_segment(Point p, Point a, Point b) {
  constexpr double eps = 1e-12;
  const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
  if (std::abs(cross) > eps) return false;
  return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps &&
         p.y >= std::min(a.y, b.y) - eps && p.y <= std::max(a.y, b.y) + eps;
}

bool polygon_contains(const std::vector<Point>& v, Point p) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if (on_segment(p, v[j], v[i])) return true;
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x_cross = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

std::size_t cell_of(double t, std::size_t cells) {
  if (!(t > 0.0)) return 0;
  const auto k = static_cast<std::size_t>(t * static_cast<double>(cells));
  return std::min(k, cells - 1);
}

bool bitmap_contains(const shape::Bitmap& b, Space space, double first, double second) {
  std::size_t row;
  std::size_t col;
  if (space == Space::picture) {
    col = cell_of(first, b.width);
    row = cell_of(1.0 - second, b.height);
  } else {
    row = cell_of(first, b.height);
    col = cell_of(second, b.width);
  }
  return b.cells[row * b.width + col] != 0;
}

bool node_contains(const shape::Node& node, Space space, double u, double v) {
  return std::visit(
      Overloaded{
          [&](const shape::Disc& d) {
            const double du = u - d.cx;
            const double dv = v - d.cy;
            return du * du + dv * dv <= d.r * d.r;
          },
          [&](const shape::Rect& r) { return u >= r.x0 && u <= r.x1 && v >= r.y0 && v <= r.y1; },
          [&](const shape::HalfPlane& h) { return h.a * u + h.b * v <= h.c; },
          [&](const shape::Polygon& p) { return polygon_contains(p.vertices, Point{u, v}); },
          [&](const shape::Bitmap& b) { return bitmap_contains(b, space, u, v); },
          [](const shape::Full&) { return true; },
          [](const shape::Empty&) { return false; },
          [&](const shape::Union& c) {
            return std::any_of(c.parts.begin(), c.parts.end(),
                               [&](const Pattern& p) { return p.contains(u, v); });
          },
          [&](const shape::Intersect& c) {
            return std::all_of(c.parts.begin(), c.parts.end(),
                               [&](const Pattern& p) { return p.contains(u, v); });
          },
          [&](const shape::Complement& c) { return !c.parts[0].contains(u, v); },
          [&](const shape::Difference& c) {
            return c.parts[0].contains(u, v) && !c.parts[1].contains(u, v);
          },
      },
      node);
}

void require_same_space(const std::vector<Pattern>& parts, Space& space) {
  if (parts.empty()) throw ValidationError("boolean combination needs at least one operand");
  space = parts.front().space();
  for (const Pattern& p : parts) {
    if (p.space() != space) throw ValidationError("boolean combination mixes picture and index space");
  }
}

// Leaf-wise image under (x, y) -> (1 - y, x) when `forward`, else the inverse
// (r, c) -> (c, 1 - r).
Pattern flip(const Pattern& p, bool forward) {
  const Space target = forward ? Space::index : Space::picture;
  auto map_point = [forward](Point q) {
    return forward ? Point{1.0 - q.y, q.x} : Point{q.y, 1.0 - q.x};
  };
  auto map_all = [&](const std::vector<Pattern>& parts) {
    std::vector<Pattern> out;
    out.reserve(parts.size());
    for (const Pattern& q : parts) out.push_back(flip(q, forward));
    return out;
  };
  return std::visit(
      Overloaded{
          [&](const shape::Disc& d) {
            const Point c = map_point({d.cx, d.cy});
            return Pattern::disc(c.x, c.y, d.r, target);
          },
          [&](const shape::Rect& r) {
            const Point a = map_point({r.x0, r.y0});
            const Point b = map_point({r.x1, r.y1});
            return Pattern::rect(std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x),
                                 std::max(a.y, b.y), target);
          },
          [&](const shape::HalfPlane& h) {
            // forward: a*c + b*(1 - r) <= c0  <=>  -b*r + a*c <= c0 - b
            // inverse: a*(1 - y) + b*x <= c0  <=>  b*x - a*y <= c0 - a
            return forward ? Pattern::half_plane(-h.b, h.a, h.c - h.b, target)
                           : Pattern::half_plane(h.b, -h.a, h.c - h.a, target);
          },
          [&](const shape::Polygon& poly) {
            std::vector<Point> vs;
            vs.reserve(poly.vertices.size());
            for (Point q : poly.vertices) vs.push_back(map_point(q));
            return Pattern::polygon(std::move(vs), target);
          },
          [&](const shape::Bitmap& b) { return Pattern::bitmap(b.width, b.height, b.cells, target); },
          [&](const shape::Full&) { return Pattern::full(target); },
          [&](const shape::Empty&) { return Pattern::empty(target); },
          [&](const shape::Union& c) { return Pattern::unite(map_all(c.parts)); },
          [&](const shape::Intersect& c) { return Pattern::intersect(map_all(c.parts)); },
          [&](const shape::Complement& c) { return Pattern::complement(flip(c.parts[0], forward)); },
          [&](const shape::Difference& c) {
            return Pattern::difference(flip(c.parts[0], forward), flip(c.parts[1], forward));
          },
      },
      p.node());
}

}  // namespace

std::string_view to_string(Space space) noexcept {
  return space == Space::picture ? "picture" : "index";
}

Pattern Pattern::make(shape::Node node, Space space) {
  return Pattern(std::make_shared<const shape::Node>(std::move(node)), space);
}

Pattern Pattern::disc(double cx, double cy, double r, Space space) {
  require_unit(cx, "disc centre");
  require_unit(cy, "disc centre");
  if (!std::isfinite(r) || r < 0.0) throw ValidationError("disc radius must be a finite value >= 0");
  return make(shape::Disc{cx, cy, r}, space);
}

Pattern Pattern::rect(double x0, double y0, double x1, double y1, Space space) {
  for (double v : {x0, y0, x1, y1}) require_unit(v, "rect");
  if (x0 > x1 || y0 > y1) throw ValidationError("rect requires x0 <= x1 and y0 <= y1");
  return make(shape::Rect{x0, y0, x1, y1}, space);
}

Pattern Pattern::half_plane(double a, double b, double c, Space space) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw ValidationError("halfplane coefficients must be finite");
  }
  return make(shape::HalfPlane{a, b, c}, space);
}

Pattern Pattern::polygon(std::vector<Point> vertices, Space space) {
  if (vertices.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  for (Point q : vertices) {
    require_unit(q.x, "polygon");
    require_unit(q.y, "polygon");
  }
  return make(shape::Polygon{std::move(vertices)}, space);
}

Pattern Pattern::bitmap(std::size_t width, std::size_t height, std::vector<std::uint8_t> cells,
                        Space space) {
  if (width == 0 || height == 0) throw ValidationError("bitmap needs positive width and height");
  if (cells.size() != width * height) throw ValidationError("bitmap cell count does not match w * h");
  return make(shape::Bitmap{width, height, std::move(cells)}, space);
}

Pattern Pattern::full(Space space) { return make(shape::Full{}, space); }

Pattern Pattern::empty(Space space) { return make(shape::Empty{}, space); }

Pattern Pattern::unite(std::vector<Pattern> parts) {
  Space space;
  require_same_space(parts, space);
  return make(shape::Union{std::move(parts)}, space);
}

Pattern Pattern::intersect(std::vector<Pattern> parts) {
  Space space;
  require_same_space(parts, space);
  return make(shape::Intersect{std::move(parts)}, space);
}

Pattern Pattern::complement(Pattern part) {
  const Space space = part.space();
  return make(shape::Complement{{std::move(part)}}, space);
}

Pattern Pattern::difference(Pattern minuend, Pattern subtrahend) {
  if (minuend.space() != subtrahend.space()) {
    throw ValidationError("difference mixes picture and index space");
  }
  const Space space = minuend.space();
  return make(shape::Difference{{std::move(minuend), std::move(subtrahend)}}, space);
}

bool Pattern::contains(double first, double second) const noexcept {
  return node_contains(*node_, space_, first, second);
}

bool Pattern::is_full() const noexcept { return std::holds_alternative<shape::Full>(*node_); }

bool Pattern::is_empty() const noexcept { return std::holds_alternative<shape::Empty>(*node_); }

Pattern to_index_space(const Pattern& picture) {
  if (picture.space() != Space::picture) throw ValidationError("to_index_space expects a picture-space pattern");
  return flip(picture, true);
}

Pattern to_picture_space(const Pattern& index) {
  if (index.space() != Space::index) throw ValidationError("to_picture_space expects an index-space pattern");
  return flip(index, false);
}

bool cell_active(const Pattern& p, std::size_t n, std::size_t i, std::size_t j, unsigned supersample) {
  if (n == 0 || i < 1 || i > n || j < 1 || j > n) throw ValidationError("cell index out of range");
  if (supersample == 0) throw ValidationError("supersample must be >= 1");
  const double nd = static_cast<double>(n);
  if (supersample == 1) {
    return p.contains((static_cast<double>(i) - 0.5) / nd, (static_cast<double>(j) - 0.5) / nd);
  }
  const double k = static_cast<double>(supersample);
  for (unsigned a = 0; a < supersample; ++a) {
    const double r = (static_cast<double>(i - 1) + (a + 0.5) / k) / nd;
    for (unsigned b = 0; b < supersample; ++b) {
      const double c = (static_cast<double>(j - 1) + (b + 0.5) / k) / nd;
      if (p.contains(r, c)) return true;
    }
  }
  return false;
}

std::vector<std::uint8_t> activation_mask(const Pattern& p, std::size_t n, unsigned supersample) {
  std::vector<std::uint8_t> mask(n * n, 0);
  if (p.is_full()) {
    std::fill(mask.begin(), mask.end(), 1);
    return mask;
  }
  if (p.is_empty()) return mask;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      mask[(i - 1) * n + (j - 1)] = cell_active(p, n, i, j, supersample) ? 1 : 0;
    }
  }
  return mask;
}

MomentEstimate area_mc(const Pattern& p, std::size_t samples, std::uint64_t seed, unsigned threads) {
  if (samples == 0) throw ValidationError("area_mc needs at least one sample");
  constexpr std::size_t chunk = 1u << 14;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<std::size_t> hits(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(samples, begin + chunk);
    std::size_t h = 0;
    for (std::size_t s = begin; s < end; ++s) {
      CounterRng rng(derive_seed(seed, {s}));
      const double u = rng.uniform();
      const double v = rng.uniform();
      if (p.contains(u, v)) ++h;
    }
    hits[c] = h;
  });
  std::size_t total = 0;
  for (std::size_t h : hits) total += h;
  const double n = static_cast<double>(samples);
  const double mean = static_cast<double>(total) / n;
  // Bernoulli sample variance with Bessel correction.
  const double var = samples > 1 ? mean * (1.0 - mean) * n / (n - 1.0) : 0.0;
  return MomentEstimate{mean, std::sqrt(std::max(0.0, var) / n), samples, Method::mc};
}

namespace {

constexpr std::array<std::string_view, 5> kPresets{"full", "empty", "lower-triangular",
                                                   "upper-triangular", "three-discs"};

}  // namespace

bool is_preset(std::string_view name) noexcept {
  return std::find(kPresets.begin(), kPresets.end(), name) != kPresets.end();
}

std::vector<std::string> preset_names() { return {kPresets.begin(), kPresets.end()}; }

Pattern preset(std::string_view name) {
  if (name == "full") return Pattern::full();
  if (name == "empty") return Pattern::empty();
  // x + y <= 1: rendered as a lower-triangular matrix.
  if (name == "lower-triangular") return Pattern::half_plane(1.0, 1.0, 1.0);
  // x + y >= 1
  if (name == "upper-triangular") return Pattern::half_plane(-1.0, -1.0, -1.0);
  if (name == "three-discs") {
    // Head and two mirror-symmetric ears.
    return Pattern::unite({Pattern::disc(0.5, 0.33, 1.0 / std::sqrt(8.0)),
                           Pattern::disc(1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0),
                           Pattern::disc(5.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0)});
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

}  // namespace patmat
