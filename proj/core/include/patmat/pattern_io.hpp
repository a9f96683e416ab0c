#pragma once

// Pattern files.
//
// JSON objects: {"disc":[cx,cy,r]}, {"rect":[x0,y0,x1,y1]},
// {"halfplane":[a,b,c]} (a*x + b*y <= c), {"polygon":[[x,y],...]},
// {"bitmap":{"w":W,"h":H,"rows":["0110",...]}}, {"preset":name},
// {"union":[...]}, {"intersect":[...]}, {"complement":p},
// {"difference":[p,q]}. The top-level object may carry
// "space": "picture" | "index" (default picture) either next to the shape key
// or together with a "pattern" key holding the shape.
//
// PGM images (P2 or P5) become picture-space bitmaps; nonzero pixels are
// active cells.

#include <filesystem>
#include <string>
#include <string_view>

#include "patmat/pattern.hpp"

namespace patmat {

/// Parses pattern JSON. The returned pattern is in the space the text
/// declares (picture unless stated otherwise).
Pattern parse_pattern(std::string_view text);

/// Parses a binary (P5) or plain (P2) PGM image into a picture-space bitmap.
Pattern parse_pgm(std::string_view bytes);

/// Reads a pattern file; `.pgm` files, or files starting with "P2"/"P5",
/// go through parse_pgm, everything else through parse_pattern.
Pattern load_pattern_file(const std::filesystem::path& path);

/// Resolves a command-line pattern argument (preset name or file path) and
/// converts it to index space, the form every moment engine consumes.
Pattern load_index_pattern(std::string_view arg);

/// Index-space form of any pattern: picture patterns are flipped, index
/// patterns returned unchanged.
Pattern ingest(const Pattern& p);

/// Serialises a pattern to the JSON grammar above (with its "space").
std::string to_json(const Pattern& p);

}  // namespace patmat
