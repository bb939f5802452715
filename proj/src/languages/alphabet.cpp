#include "ssmc/alphabet.hpp"

#include <sstream>
#include <stdexcept>

namespace ssmc {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw std::invalid_argument("alphabet must not be empty");
  if (symbols_.size() > kMaxSymbols)
    throw std::invalid_argument("alphabet has more than " + std::to_string(kMaxSymbols) + " symbols");
  for (size_t i = 0; i < symbols_.size(); ++i) {
    const auto& s = symbols_[i];
    if (s.empty() || s.find_first_of(" \t\n,") != std::string::npos)
      throw std::invalid_argument("invalid symbol name '" + s + "'");
    if (!index_.emplace(s, static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate symbol '" + s + "'");
  }
}

int Alphabet::index(const std::string& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) throw std::invalid_argument("unknown symbol '" + s + "'");
  return it->second;
}

Word Alphabet::parse_word(std::string_view text) const {
  Word w;
  std::string t(text);
  if (t.find(' ') == std::string::npos && !t.empty()) {
    bool single = true;
    for (const auto& s : symbols_) single = single && s.size() == 1;
    if (single) {
      for (char c : t) w.push_back(index(std::string(1, c)));
      return w;
    }
  }
  std::istringstream is(t);
  std::string tok;
  while (is >> tok) w.push_back(index(tok));
  return w;
}

std::string Alphabet::format(const Word& w) const {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += name(w[i]);
  }
  return out;
}

std::string label_to_string(const PredictiveLabel& label, const Alphabet& alphabet) {
  std::string out;
  for (size_t i = 0; i <= alphabet.size(); ++i) out += label.test(i) ? '1' : '0';
  return out;
}

PredictiveLabel label_from_string(std::string_view bits, const Alphabet& alphabet) {
  if (bits.size() != alphabet.size() + 1)
    throw std::invalid_argument("label bitstring has wrong length");
  PredictiveLabel l;
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') l.set(i);
    else if (bits[i] != '0') throw std::invalid_argument("label bitstring must contain only 0/1");
  }
  return l;
}

PredictiveLabel all_symbols(const Alphabet& alphabet, bool with_eos) {
  PredictiveLabel l;
  for (size_t i = 0; i < alphabet.size(); ++i) l.set(i);
  if (with_eos) l.set(alphabet.size());
  return l;
}

}  // namespace ssmc
