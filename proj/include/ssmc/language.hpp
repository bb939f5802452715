#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ssmc/alphabet.hpp"
#include "ssmc/dfa.hpp"

namespace ssmc {

using Rng = std::mt19937_64;

enum class LanguageKind { Regular, FlipFlop, Counter, BoundedDyck };

// Incremental membership/label oracle along a prefix.
class LanguageCursor {
 public:
  virtual ~LanguageCursor() = default;
  virtual std::unique_ptr<LanguageCursor> clone() const = 0;
  virtual void push(int symbol) = 0;
  // False once the prefix can no longer be extended to a member.
  virtual bool alive() const = 0;
  virtual bool accepting() const = 0;
  // Only meaningful while alive().
  virtual PredictiveLabel label() const = 0;
};

// Counters with per-symbol increments and a readout given as a union of rules.
struct CounterCondition {
  enum Kind { Token, AtLeast, AtMost };
  Kind kind = Token;
  int index = 0;  // symbol for Token, counter otherwise
  int64_t value = 0;
};

struct CounterRule {
  std::vector<CounterCondition> when;
  PredictiveLabel label;
};

struct CounterProgram {
  std::vector<std::vector<int64_t>> increments;  // [symbol][counter]
  std::vector<CounterRule> rules;
  int bound = 1;  // counters are read through clamp(c, -bound, bound)
  size_t num_counters() const { return increments.empty() ? 0 : increments[0].size(); }
};

struct FlipFlopMix {
  double write = 0.10;
  double read = 0.10;
  double ignore = 0.80;
  static FlipFlopMix dense() { return {0.10, 0.10, 0.80}; }
  static FlipFlopMix sparse() { return {0.01, 0.01, 0.98}; }
};

class Language {
 public:
  virtual ~Language() = default;

  const std::string& id() const { return id_; }
  const std::string& description() const { return description_; }
  const Alphabet& alphabet() const { return alphabet_; }
  LanguageKind kind() const { return kind_; }

  // Minimal automaton when one is available.
  virtual const Dfa* dfa() const { return nullptr; }
  virtual std::unique_ptr<LanguageCursor> cursor() const = 0;
  // Membership decided without the cursor machinery where possible.
  virtual bool member_oracle(const Word& w) const;
  // A member whose length lies in [min_len, max_len]; throws if none exists.
  virtual Word sample(Rng& rng, int min_len, int max_len) const = 0;

  virtual const CounterProgram* counter_program() const { return nullptr; }

  bool is_valid_prefix(const Word& prefix) const;
  PredictiveLabel predictive_label(const Word& prefix) const;
  // Labels after each of the prefixes of length 1..|w|.
  std::vector<PredictiveLabel> labels_along(const Word& w) const;

 protected:
  Language(std::string id, std::string description, Alphabet alphabet, LanguageKind kind)
      : id_(std::move(id)), description_(std::move(description)), alphabet_(std::move(alphabet)), kind_(kind) {}

 private:
  std::string id_;
  std::string description_;
  Alphabet alphabet_;
  LanguageKind kind_;
};

using LanguagePtr = std::shared_ptr<const Language>;

struct LanguageParams {
  int K = 2;
  int h = 2;
  FlipFlopMix mix = FlipFlopMix::dense();
};

// Resolves ids such as "tomita4", "d12", "parity", "flipflop", "anbn", "bdyck" (with params.K/h), "bdyck-8-10", "mod5".
LanguagePtr make_language(const std::string& id, const LanguageParams& params = {});
LanguagePtr make_regular_language(std::string id, std::string description, Dfa dfa);
LanguagePtr make_bounded_dyck(int K, int h);
LanguagePtr make_flipflop(FlipFlopMix mix);
LanguagePtr make_mod_counter(int k);

// The fixed catalog, in a stable order.
std::vector<std::string> catalog_ids();

struct BoundedDyckInfo {
  int K;
  int h;
};
std::optional<BoundedDyckInfo> bounded_dyck_info(const Language& lang);

// Uniformly random string (not necessarily a member) with length in [min_len, max_len].
Word random_string(const Alphabet& alphabet, Rng& rng, int min_len, int max_len);

struct Sample {
  Word word;
  std::vector<PredictiveLabel> labels;
};

std::vector<Sample> generate_samples(const Language& lang, int n, int min_len, int max_len, uint64_t seed);

}  // namespace ssmc
