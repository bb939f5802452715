#pragma once

#include <bitset>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ssmc {

inline constexpr size_t kMaxSymbols = 255;

using Word = std::vector<int>;

// Ordered content symbols. The reserved end-of-string token sits at index size().
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  size_t size() const noexcept { return symbols_.size(); }
  int eos() const noexcept { return static_cast<int>(symbols_.size()); }
  const std::string& name(int i) const { return symbols_.at(static_cast<size_t>(i)); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  bool contains(const std::string& s) const { return index_.count(s) != 0; }
  int index(const std::string& s) const;

  // Space separated symbols; a string without spaces is split into characters
  // when every symbol is a single character.
  Word parse_word(std::string_view text) const;
  std::string format(const Word& w) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

// Set of admissible next tokens over content symbols plus EOS.
using PredictiveLabel = std::bitset<kMaxSymbols + 1>;

std::string label_to_string(const PredictiveLabel& label, const Alphabet& alphabet);
PredictiveLabel label_from_string(std::string_view bits, const Alphabet& alphabet);
PredictiveLabel all_symbols(const Alphabet& alphabet, bool with_eos);

}  // namespace ssmc
