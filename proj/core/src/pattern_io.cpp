#include "patmat/pattern_io.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "patmat/errors.hpp"

namespace patmat {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError("pattern " + (where.empty() ? std::string("/") : where) + ": " + what);
}

double number_at(const json& arr, std::size_t k, const std::string& where) {
  if (!arr.is_array() || k >= arr.size() || !arr[k].is_number()) {
    fail(where, "expected a number at position " + std::to_string(k));
  }
  return arr[k].get<double>();
}

void expect_array(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) fail(where, "expected an array of " + std::to_string(n) + " numbers");
}

Pattern parse_node(const json& j, Space space, const std::string& where);

std::vector<Pattern> parse_list(const json& j, Space space, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of patterns");
  std::vector<Pattern> parts;
  for (std::size_t k = 0; k < j.size(); ++k) {
    parts.push_back(parse_node(j[k], space, where + "/" + std::to_string(k)));
  }
  return parts;
}

Pattern parse_bitmap(const json& j, Space space, const std::string& where) {
  if (!j.is_object() || !j.contains("w") || !j.contains("h") || !j.contains("rows")) {
    fail(where, "bitmap needs w, h and rows");
  }
  if (!j["w"].is_number_unsigned() || !j["h"].is_number_unsigned()) fail(where, "bitmap w and h must be positive integers");
  const auto w = j["w"].get<std::size_t>();
  const auto h = j["h"].get<std::size_t>();
  const json& rows = j["rows"];
  if (!rows.is_array() || rows.size() != h) fail(where, "bitmap must have h rows");
  std::vector<std::uint8_t> cells;
  cells.reserve(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    if (!rows[r].is_string()) fail(where + "/rows/" + std::to_string(r), "row must be a string");
    const auto& s = rows[r].get_ref<const std::string&>();
    if (s.size() != w) fail(where + "/rows/" + std::to_string(r), "row length must equal w");
    for (char ch : s) {
      if (ch != '0' && ch != '1') fail(where + "/rows/" + std::to_string(r), "rows may only contain 0 and 1");
      cells.push_back(ch == '1' ? 1 : 0);
    }
  }
  return Pattern::bitmap(w, h, std::move(cells), space);
}

Pattern parse_node(const json& j, Space space, const std::string& where) {
  if (!j.is_object() || j.size() != 1) fail(where, "expected an object with exactly one shape key");
  const std::string key = j.begin().key();
  const json& value = j.begin().value();
  const std::string here = where + "/" + key;
  try {
    if (key == "disc") {
      expect_array(value, 3, here);
      return Pattern::disc(number_at(value, 0, here), number_at(value, 1, here), number_at(value, 2, here), space);
    }
    if (key == "rect") {
      expect_array(value, 4, here);
      return Pattern::rect(number_at(value, 0, here), number_at(value, 1, here), number_at(value, 2, here),
                           number_at(value, 3, here), space);
    }
    if (key == "halfplane") {
      expect_array(value, 3, here);
      return Pattern::half_plane(number_at(value, 0, here), number_at(value, 1, here), number_at(value, 2, here),
                                 space);
    }
    if (key == "polygon") {
      if (!value.is_array()) fail(here, "expected an array of [x,y] vertices");
      std::vector<Point> vs;
      for (std::size_t k = 0; k < value.size(); ++k) {
        const std::string at = here + "/" + std::to_string(k);
        expect_array(value[k], 2, at);
        vs.push_back({number_at(value[k], 0, at), number_at(value[k], 1, at)});
      }
      return Pattern::polygon(std::move(vs), space);
    }
    if (key == "bitmap") return parse_bitmap(value, space, here);
    if (key == "preset") {
      if (!value.is_string()) fail(here, "preset name must be a string");
      Pattern p = preset(value.get<std::string>());
      return space == Space::index ? to_index_space(p) : p;
    }
    if (key == "union") return Pattern::unite(parse_list(value, space, here));
    if (key == "intersect") return Pattern::intersect(parse_list(value, space, here));
    if (key == "complement") return Pattern::complement(parse_node(value, space, here));
    if (key == "difference") {
      if (!value.is_array() || value.size() != 2) fail(here, "difference takes exactly two patterns");
      return Pattern::difference(parse_node(value[0], space, here + "/0"), parse_node(value[1], space, here + "/1"));
    }
  } catch (const PatternSyntaxError&) {
    throw;
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind("pattern /", 0) == 0) throw;
    fail(here, msg);
  }
  fail(where, "unknown shape key '" + key + "'");
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t k = 0; k < end; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json node_to_json(const Pattern& p) {
  auto list = [](const std::vector<Pattern>& parts) {
    json arr = json::array();
    for (const Pattern& q : parts) arr.push_back(node_to_json(q));
    return arr;
  };
  return std::visit(
      Overloaded{
          [](const shape::Disc& d) { return json{{"disc", {d.cx, d.cy, d.r}}}; },
          [](const shape::Rect& r) { return json{{"rect", {r.x0, r.y0, r.x1, r.y1}}}; },
          [](const shape::HalfPlane& h) { return json{{"halfplane", {h.a, h.b, h.c}}}; },
          [](const shape::Polygon& poly) {
            json vs = json::array();
            for (Point q : poly.vertices) vs.push_back({q.x, q.y});
            return json{{"polygon", vs}};
          },
          [](const shape::Bitmap& b) {
            json rows = json::array();
            for (std::size_t r = 0; r < b.height; ++r) {
              std::string s(b.width, '0');
              for (std::size_t c = 0; c < b.width; ++c) {
                if (b.cells[r * b.width + c] != 0) s[c] = '1';
              }
              rows.push_back(s);
            }
            return json{{"bitmap", {{"w", b.width}, {"h", b.height}, {"rows", rows}}}};
          },
          [](const shape::Full&) { return json{{"preset", "full"}}; },
          [](const shape::Empty&) { return json{{"preset", "empty"}}; },
          [&](const shape::Union& c) { return json{{"union", list(c.parts)}}; },
          [&](const shape::Intersect& c) { return json{{"intersect", list(c.parts)}}; },
          [&](const shape::Complement& c) { return json{{"complement", node_to_json(c.parts[0])}}; },
          [&](const shape::Difference& c) { return json{{"difference", list(c.parts)}}; },
      },
      p.node());
}

// Skips whitespace and '#' comments in a PGM header.
void skip_pgm_space(std::string_view s, std::size_t& pos) {
  while (pos < s.size()) {
    if (s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
}

std::size_t read_pgm_int(std::string_view s, std::size_t& pos) {
  skip_pgm_space(s, pos);
  if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) {
    const auto [line, col] = line_column(s, pos + 1);
    throw PatternSyntaxError("expected an unsigned integer in PGM data", line, col);
  }
  std::size_t v = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    v = v * 10 + static_cast<std::size_t>(s[pos] - '0');
    ++pos;
  }
  return v;
}

}  // namespace

Pattern parse_pattern(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw PatternSyntaxError(e.what(), line, col);
  }
  if (!doc.is_object()) fail("", "top level must be an object");

  Space space = Space::picture;
  if (doc.contains("space")) {
    const json& s = doc["space"];
    if (s == "picture") {
      space = Space::picture;
    } else if (s == "index") {
      space = Space::index;
    } else {
      fail("/space", "must be \"picture\" or \"index\"");
    }
    doc.erase("space");
  }
  if (doc.contains("pattern")) {
    if (doc.size() != 1) fail("", "\"pattern\" cannot be combined with other shape keys");
    return parse_node(doc["pattern"], space, "/pattern");
  }
  return parse_node(doc, space, "");
}

Pattern parse_pgm(std::string_view s) {
  if (s.size() < 2 || s[0] != 'P' || (s[1] != '2' && s[1] != '5')) {
    throw PatternSyntaxError("PGM must start with P2 or P5", 1, 1);
  }
  const bool binary = s[1] == '5';
  std::size_t pos = 2;
  const std::size_t width = read_pgm_int(s, pos);
  const std::size_t height = read_pgm_int(s, pos);
  const std::size_t maxval = read_pgm_int(s, pos);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) {
    throw ValidationError("PGM header has invalid dimensions or maxval");
  }
  std::vector<std::uint8_t> cells(width * height, 0);
  if (binary) {
    ++pos;  // single whitespace byte after maxval
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    if (s.size() < pos + width * height * bytes_per) {
      throw ValidationError("PGM raster is truncated");
    }
    for (std::size_t k = 0; k < width * height; ++k) {
      unsigned value = static_cast<unsigned char>(s[pos + k * bytes_per]);
      if (bytes_per == 2) value = (value << 8) | static_cast<unsigned char>(s[pos + k * bytes_per + 1]);
      cells[k] = value != 0 ? 1 : 0;
    }
  } else {
    for (std::size_t k = 0; k < width * height; ++k) cells[k] = read_pgm_int(s, pos) != 0 ? 1 : 0;
  }
  return Pattern::bitmap(width, height, std::move(cells), Space::picture);
}

Pattern load_pattern_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open pattern file '" + path.string() + "'");
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const bool pgm = path.extension() == ".pgm" ||
                   (data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '5'));
  return pgm ? parse_pgm(data) : parse_pattern(data);
}

Pattern ingest(const Pattern& p) { return p.space() == Space::picture ? to_index_space(p) : p; }

Pattern load_index_pattern(std::string_view arg) {
  if (is_preset(arg)) return to_index_space(preset(arg));
  return ingest(load_pattern_file(std::filesystem::path(std::string(arg))));
}

std::string to_json(const Pattern& p) {
  json doc = node_to_json(p);
  doc["space"] = std::string(to_string(p.space()));
  return doc.dump();
}

}  // namespace patmat
