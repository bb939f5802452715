#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ssmc/alphabet.hpp"

namespace ssmc {

// Complete deterministic automaton; states are 0..num_states()-1.
struct Dfa {
  Alphabet alphabet;
  int start = 0;
  std::vector<std::vector<int>> delta;  // delta[state][symbol]
  std::vector<bool> accepting;
  std::vector<std::string> state_names;  // optional, same length as delta when set

  int num_states() const { return static_cast<int>(delta.size()); }
  int step(int q, int sym) const { return delta[static_cast<size_t>(q)][static_cast<size_t>(sym)]; }
  void validate() const;
};

int dfa_run(const Dfa& dfa, const Word& w);
int dfa_run_from(const Dfa& dfa, int state, const Word& w);
bool dfa_accepts(const Dfa& dfa, const Word& w);

// States from which an accepting state is reachable.
std::vector<bool> coreachable(const Dfa& dfa);
PredictiveLabel label_of_state(const Dfa& dfa, int q, const std::vector<bool>& coreach);
// Throws std::invalid_argument when the prefix is not a prefix of any word in L.
PredictiveLabel predictive_label_regular(const Dfa& dfa, const Word& prefix);

Dfa minimize(const Dfa& dfa);
bool is_aperiodic(const Dfa& dfa);

// Transformation monoid of a complete automaton, as maps state -> state.
using Transformation = std::vector<int>;
std::vector<Transformation> transition_monoid(const Dfa& dfa, size_t limit = 2000000);

Dfa parse_dfa_text(std::string_view text);
std::string format_dfa_text(const Dfa& dfa);

// Builds the reachable part of an automaton given by a step function on keys.
template <typename Key>
Dfa dfa_from_step(const Alphabet& alphabet, const Key& start,
                  const std::function<Key(const Key&, int)>& step,
                  const std::function<bool(const Key&)>& accept) {
  Dfa d;
  d.alphabet = alphabet;
  std::map<Key, int> ids;
  std::vector<Key> keys;
  ids.emplace(start, 0);
  keys.push_back(start);
  for (size_t i = 0; i < keys.size(); ++i) {
    Key k = keys[i];
    std::vector<int> row;
    for (size_t s = 0; s < alphabet.size(); ++s) {
      Key n = step(k, static_cast<int>(s));
      auto [it, inserted] = ids.emplace(n, static_cast<int>(keys.size()));
      if (inserted) keys.push_back(n);
      row.push_back(it->second);
    }
    d.delta.push_back(std::move(row));
    d.accepting.push_back(accept(k));
  }
  return d;
}

}  // namespace ssmc
