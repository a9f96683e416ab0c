#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace patmat {

/// One factor of a word: a letter id and whether the adjoint is taken.
struct Symbol {
  int letter = 0;
  bool starred = false;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// A finite product of letters and adjoints, e.g. x x* x x* ("aAaA").
/// Letter ids are assigned by first appearance and form 0..letter_count()-1.
class Word {
public:
  /// Lowercase letters are unstarred, uppercase the adjoint of the same
  /// letter: "aAb" = a a* b.
  static Word parse(std::string_view text);

  /// Builds a word from explicit symbols; letter ids must cover 0..k-1.
  explicit Word(std::vector<Symbol> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  int letter_count() const noexcept { return letter_count_; }
  const Symbol& operator[](std::size_t k) const noexcept { return symbols_[k]; }
  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

  /// Canonical spelling: letter id 0 -> 'a', 1 -> 'b', ...; starred in uppercase.
  std::string render() const;

  friend bool operator==(const Word&, const Word&) = default;

private:
  std::vector<Symbol> symbols_;
  int letter_count_ = 0;
};

struct StarCount {
  std::size_t unstarred = 0;
  std::size_t starred = 0;

  friend bool operator==(const StarCount&, const StarCount&) = default;
};

/// Per-letter (unstarred, starred) counts, indexed by letter id.
std::vector<StarCount> star_balance(const Word& w);

/// Even length and every letter has as many starred as unstarred symbols.
/// The limiting moment vanishes whenever this is false.
bool is_even_balanced(const Word& w);

/// Concatenation with the letters of `tail` shifted past those of `head`, so
/// the two parts refer to independent matrices.
Word concat_independent(const Word& head, const Word& tail);

}  // namespace patmat
