#include "patmat/words.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "patmat/errors.hpp"

namespace patmat {

Word Word::parse(std::string_view text) {
  if (text.empty()) throw ValidationError("word is empty");
  std::array<int, 26> ids;
  ids.fill(-1);
  int next = 0;
  std::vector<Symbol> symbols;
  symbols.reserve(text.size());
  for (char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (!std::isalpha(uc) || uc > 127) {
      throw ValidationError("word '" + std::string(text) + "' contains non-alphabetic character '" +
                            std::string(1, ch) + "'");
    }
    const int slot = std::tolower(uc) - 'a';
    if (ids[slot] < 0) ids[slot] = next++;
    symbols.push_back(Symbol{ids[slot], std::isupper(uc) != 0});
  }
  return Word(std::move(symbols));
}

Word::Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ValidationError("word is empty");
  int max_id = -1;
  for (const Symbol& s : symbols_) {
    if (s.letter < 0) throw ValidationError("negative letter id");
    max_id = std::max(max_id, s.letter);
  }
  std::vector<bool> seen(static_cast<std::size_t>(max_id) + 1, false);
  for (const Symbol& s : symbols_) seen[static_cast<std::size_t>(s.letter)] = true;
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ValidationError("letter ids must form a contiguous range starting at 0");
  }
  letter_count_ = max_id + 1;
}

std::string Word::render() const {
  std::string out;
  out.reserve(symbols_.size());
  for (const Symbol& s : symbols_) {
    if (s.letter >= 26) throw ValidationError("word has more than 26 letters and cannot be spelled");
    const char base = s.starred ? 'A' : 'a';
    out.push_back(static_cast<char>(base + s.letter));
  }
  return out;
}

std::vector<StarCount> star_balance(const Word& w) {
  std::vector<StarCount> counts(static_cast<std::size_t>(w.letter_count()));
  for (const Symbol& s : w.symbols()) {
    auto& c = counts[static_cast<std::size_t>(s.letter)];
    (s.starred ? c.starred : c.unstarred) += 1;
  }
  return counts;
}

bool is_even_balanced(const Word& w) {
  if (w.size() % 2 != 0) return false;
  const auto counts = star_balance(w);
  return std::all_of(counts.begin(), counts.end(),
                     [](const StarCount& c) { return c.starred == c.unstarred; });
}

Word concat_independent(const Word& head, const Word& tail) {
  std::vector<Symbol> symbols = head.symbols();
  for (Symbol s : tail.symbols()) {
    s.letter += head.letter_count();
    symbols.push_back(s);
  }
  return Word(std::move(symbols));
}

}  // namespace patmat
