#include "ssmc/language.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace ssmc {

bool Language::member_oracle(const Word& w) const {
  auto c = cursor();
  for (int s : w) {
    c->push(s);
    if (!c->alive()) return false;
  }
  return c->alive() && c->accepting();
}

bool Language::is_valid_prefix(const Word& prefix) const {
  auto c = cursor();
  for (int s : prefix) {
    c->push(s);
    if (!c->alive()) return false;
  }
  return c->alive();
}

PredictiveLabel Language::predictive_label(const Word& prefix) const {
  auto c = cursor();
  for (int s : prefix) c->push(s);
  if (!c->alive()) throw std::invalid_argument(id() + ": not a valid prefix: " + alphabet().format(prefix));
  return c->label();
}

std::vector<PredictiveLabel> Language::labels_along(const Word& w) const {
  std::vector<PredictiveLabel> out;
  out.reserve(w.size());
  auto c = cursor();
  for (size_t i = 0; i < w.size(); ++i) {
    c->push(w[i]);
    if (!c->alive())
      throw std::invalid_argument(id() + ": not a valid prefix at position " + std::to_string(i + 1));
    out.push_back(c->label());
  }
  return out;
}

namespace {

void check_symbol(const Alphabet& a, int s) {
  if (s < 0 || static_cast<size_t>(s) >= a.size()) throw std::invalid_argument("symbol index out of range");
}

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

template <typename T>
const T& pick_from(Rng& rng, const std::vector<T>& v) {
  if (v.empty()) throw std::logic_error("pick from empty set");
  return v[static_cast<size_t>(pick(rng, 0, static_cast<int>(v.size()) - 1))];
}

void check_range(int min_len, int max_len) {
  if (min_len < 0 || max_len < min_len) throw std::invalid_argument("invalid length range");
}

// ---------------------------------------------------------------- regular

class RegularLanguage final : public Language {
 public:
  RegularLanguage(std::string id, std::string description, Dfa dfa, std::function<bool(const Word&)> oracle)
      : Language(std::move(id), std::move(description), dfa.alphabet, LanguageKind::Regular),
        dfa_(minimize(dfa)),
        oracle_(std::move(oracle)) {
    co_ = coreachable(dfa_);
    for (int q = 0; q < dfa_.num_states(); ++q) labels_.push_back(label_of_state(dfa_, q, co_));
  }

  const Dfa* dfa() const override { return &dfa_; }

  bool member_oracle(const Word& w) const override {
    for (int s : w) check_symbol(alphabet(), s);
    return oracle_ ? oracle_(w) : dfa_accepts(dfa_, w);
  }

  class Cursor final : public LanguageCursor {
   public:
    explicit Cursor(const RegularLanguage* l) : l_(l), q_(l->dfa_.start) {}
    std::unique_ptr<LanguageCursor> clone() const override { return std::make_unique<Cursor>(*this); }
    void push(int s) override {
      check_symbol(l_->alphabet(), s);
      q_ = l_->dfa_.step(q_, s);
    }
    bool alive() const override { return l_->co_[static_cast<size_t>(q_)]; }
    bool accepting() const override { return l_->dfa_.accepting[static_cast<size_t>(q_)]; }
    PredictiveLabel label() const override { return l_->labels_[static_cast<size_t>(q_)]; }

   private:
    const RegularLanguage* l_;
    int q_;
  };

  std::unique_ptr<LanguageCursor> cursor() const override { return std::make_unique<Cursor>(this); }

  Word sample(Rng& rng, int min_len, int max_len) const override {
    check_range(min_len, max_len);
    extend(static_cast<size_t>(max_len));
    std::vector<int> lengths;
    for (int L = min_len; L <= max_len; ++L)
      if (feasible_[static_cast<size_t>(L)][static_cast<size_t>(dfa_.start)]) lengths.push_back(L);
    if (lengths.empty()) throw std::invalid_argument(id() + ": no member with length in range");
    int L = pick_from(rng, lengths);
    Word w;
    int q = dfa_.start;
    for (int r = L; r > 0; --r) {
      std::vector<int> ok;
      for (size_t s = 0; s < alphabet().size(); ++s)
        if (feasible_[static_cast<size_t>(r - 1)][static_cast<size_t>(dfa_.step(q, static_cast<int>(s)))])
          ok.push_back(static_cast<int>(s));
      int s = pick_from(rng, ok);
      w.push_back(s);
      q = dfa_.step(q, s);
    }
    return w;
  }

 private:
  // feasible_[r][q]: some accepting state is reachable from q in exactly r steps
  void extend(size_t r_max) const {
    if (feasible_.empty()) {
      std::vector<char> base(static_cast<size_t>(dfa_.num_states()));
      for (size_t q = 0; q < base.size(); ++q) base[q] = dfa_.accepting[q];
      feasible_.push_back(std::move(base));
    }
    while (feasible_.size() <= r_max) {
      const auto& prev = feasible_.back();
      std::vector<char> cur(prev.size(), 0);
      for (size_t q = 0; q < cur.size(); ++q)
        for (size_t s = 0; s < alphabet().size() && !cur[q]; ++s)
          cur[q] = prev[static_cast<size_t>(dfa_.step(static_cast<int>(q), static_cast<int>(s)))];
      feasible_.push_back(std::move(cur));
    }
  }

  Dfa dfa_;
  std::function<bool(const Word&)> oracle_;
  std::vector<bool> co_;
  std::vector<PredictiveLabel> labels_;
  mutable std::vector<std::vector<char>> feasible_;
};

Dfa table_dfa(const Alphabet& a, std::vector<std::vector<int>> delta, std::vector<bool> accept) {
  Dfa d;
  d.alphabet = a;
  d.delta = std::move(delta);
  d.accepting = std::move(accept);
  d.validate();
  return d;
}

std::string as_text(const Word& w, const Alphabet& a) {
  std::string s;
  for (int c : w) s += a.name(c);
  return s;
}

LanguagePtr tomita(int n) {
  Alphabet a({"0", "1"});
  const int D = -1;
  auto make = [&](std::vector<std::vector<int>> delta, std::vector<bool> acc, std::function<bool(const std::string&)> f,
                  std::string desc) {
    int dead = static_cast<int>(delta.size());
    for (auto& row : delta)
      for (auto& t : row)
        if (t == D) t = dead;
    delta.push_back({dead, dead});
    acc.push_back(false);
    return std::make_shared<RegularLanguage>("tomita" + std::to_string(n), std::move(desc), table_dfa(a, delta, acc),
                                             [a, f](const Word& w) { return f(as_text(w, a)); });
  };
  switch (n) {
    case 1:
      return make({{D, 0}}, {true},
                  [](const std::string& s) { return s.find('0') == std::string::npos; }, "1*");
    case 2:
      return make({{D, 1}, {0, D}}, {true, false},
                  [](const std::string& s) {
                    if (s.size() % 2) return false;
                    for (size_t i = 0; i < s.size(); ++i)
                      if (s[i] != (i % 2 ? '0' : '1')) return false;
                    return true;
                  },
                  "(10)*");
    case 3:
      // 0: even run of 1s (or start), 1: odd run of 1s, 2: odd 0s after odd 1s, 3: even 0s after odd 1s
      return make({{0, 1}, {2, 0}, {3, D}, {2, 1}}, {true, true, false, true},
                  [](const std::string& s) {
                    std::vector<std::pair<char, size_t>> runs;
                    for (char c : s) {
                      if (!runs.empty() && runs.back().first == c) ++runs.back().second;
                      else runs.push_back({c, 1});
                    }
                    for (size_t i = 0; i + 1 < runs.size(); ++i)
                      if (runs[i].first == '1' && runs[i].second % 2 == 1 && runs[i + 1].second % 2 == 1)
                        return false;
                    return true;
                  },
                  "no odd run of 1s followed by an odd run of 0s");
    case 4:
      return make({{1, 0}, {2, 0}, {D, 0}}, {true, true, true},
                  [](const std::string& s) { return s.find("000") == std::string::npos; }, "no 000");
    case 5:
      // (length parity, ones parity)
      return make({{1, 3}, {0, 2}, {3, 1}, {2, 0}}, {true, false, false, false},
                  [](const std::string& s) {
                    return s.size() % 2 == 0 && std::count(s.begin(), s.end(), '1') % 2 == 0;
                  },
                  "even length and even number of 1s");
    case 6:
      return make({{1, 2}, {2, 0}, {0, 1}}, {true, false, false},
                  [](const std::string& s) {
                    long d = static_cast<long>(std::count(s.begin(), s.end(), '0')) -
                             static_cast<long>(std::count(s.begin(), s.end(), '1'));
                    return ((d % 3) + 3) % 3 == 0;
                  },
                  "#0 - #1 divisible by 3");
    case 7:
      return make({{0, 1}, {2, 1}, {2, 3}, {D, 3}}, {true, true, true, true},
                  [](const std::string& s) {
                    std::string pattern = "0101";
                    size_t k = 0;
                    for (char c : s) {
                      while (k < pattern.size() && pattern[k] != c) ++k;
                      if (k == pattern.size()) return false;
                    }
                    return true;
                  },
                  "0*1*0*1*");
    default:
      throw std::invalid_argument("unknown Tomita grammar " + std::to_string(n));
  }
}

LanguagePtr dn_language(int n) {
  if (n < 1) throw std::invalid_argument("depth bound must be positive");
  Alphabet a({"a", "b"});
  std::function<int(const int&, int)> step = [n](const int& d, int s) {
    if (d < 0) return -1;
    int nd = d + (s == 0 ? 1 : -1);
    return (nd < 0 || nd > n) ? -1 : nd;
  };
  std::function<bool(const int&)> acc = [](const int& d) { return d == 0; };
  return make_regular_language("d" + std::to_string(n), "D_" + std::to_string(n) + " = (a D_" + std::to_string(n - 1) + " b)*",
                               dfa_from_step<int>(a, 0, step, acc));
}

LanguagePtr mod_language(std::string id, int k) {
  if (k < 2) throw std::invalid_argument("modulus must be at least 2");
  Alphabet a({"0", "1"});
  std::function<int(const int&, int)> step = [k](const int& r, int s) { return (r + s) % k; };
  std::function<bool(const int&)> acc = [](const int& r) { return r == 0; };
  return std::make_shared<RegularLanguage>(
      std::move(id), "number of 1s divisible by " + std::to_string(k), dfa_from_step<int>(a, 0, step, acc),
      [k](const Word& w) { return std::count(w.begin(), w.end(), 1) % k == 0; });
}

LanguagePtr unary_period(int k) {
  Alphabet a({"a"});
  std::function<int(const int&, int)> step = [k](const int& r, int) { return (r + 1) % k; };
  std::function<bool(const int&)> acc = [](const int& r) { return r == 0; };
  std::string id = std::string(static_cast<size_t>(k), 'a') + "-star";
  return std::make_shared<RegularLanguage>(id, "(" + std::string(static_cast<size_t>(k), 'a') + ")*",
                                           dfa_from_step<int>(a, 0, step, acc),
                                           [k](const Word& w) { return w.size() % static_cast<size_t>(k) == 0; });
}

LanguagePtr abab_star() {
  Alphabet a({"a", "b"});
  // position mod 4 in "abab", -1 dead
  std::function<int(const int&, int)> step = [](const int& r, int s) {
    if (r < 0) return -1;
    int want = r % 2 == 0 ? 0 : 1;
    return s == want ? (r + 1) % 4 : -1;
  };
  std::function<bool(const int&)> acc = [](const int& r) { return r == 0; };
  return std::make_shared<RegularLanguage>("abab-star", "(abab)*", dfa_from_step<int>(a, 0, step, acc),
                                           [a](const Word& w) {
                                             std::string s = as_text(w, a);
                                             if (s.size() % 4) return false;
                                             for (size_t i = 0; i < s.size(); i += 4)
                                               if (s.compare(i, 4, "abab") != 0) return false;
                                             return true;
                                           });
}

LanguagePtr chain_abcde() {
  Alphabet a({"a", "b", "c", "d", "e"});
  // number of completed blocks so far, -1 dead
  std::function<int(const int&, int)> step = [](const int& ph, int s) {
    if (ph < 0) return -1;
    if (s == ph - 1) return ph;  // repeat current letter
    if (s == ph) return ph + 1;  // next letter
    return -1;
  };
  std::function<bool(const int&)> acc = [](const int& ph) { return ph == 5; };
  return std::make_shared<RegularLanguage>(
      "chain-abcde", "aa*bb*cc*dd*ee*", dfa_from_step<int>(a, 0, step, acc), [a](const Word& w) {
        std::string s = as_text(w, a);
        size_t i = 0;
        for (char c : std::string("abcde")) {
          size_t j = i;
          while (j < s.size() && s[j] == c) ++j;
          if (j == i) return false;
          i = j;
        }
        return i == s.size();
      });
}

LanguagePtr ab_d_bc() {
  Alphabet a({"a", "b", "c", "d"});
  std::function<int(const int&, int)> step = [](const int& st, int s) {
    if (st == 0) return (s == 0 || s == 1) ? 0 : (s == 3 ? 1 : -1);
    if (st == 1) return (s == 1 || s == 2) ? 1 : -1;
    return -1;
  };
  std::function<bool(const int&)> acc = [](const int& st) { return st == 1; };
  return std::make_shared<RegularLanguage>(
      "ab-d-bc", "{a,b}*d{b,c}*", dfa_from_step<int>(a, 0, step, acc), [a](const Word& w) {
        std::string s = as_text(w, a);
        auto d = s.find('d');
        if (d == std::string::npos || s.find('d', d + 1) != std::string::npos) return false;
        return s.substr(0, d).find_first_not_of("ab") == std::string::npos &&
               s.substr(d + 1).find_first_not_of("bc") == std::string::npos;
      });
}

LanguagePtr ends_02() {
  Alphabet a({"0", "1", "2"});
  std::function<int(const int&, int)> step = [](const int& st, int s) {
    if (s == 0) return 1;
    if (s == 1) return 0;
    return st;
  };
  std::function<bool(const int&)> acc = [](const int& st) { return st == 1; };
  return std::make_shared<RegularLanguage>(
      "ends-02", "{0,1,2}*02*", dfa_from_step<int>(a, 0, step, acc), [a](const Word& w) {
        std::string s = as_text(w, a);
        auto k = s.find_last_not_of('2');
        return k != std::string::npos && s[k] == '0';
      });
}

// ---------------------------------------------------------------- flip-flop

enum FlipSym { kW = 0, kR = 1, kI = 2, kBit0 = 3, kBit1 = 4 };

struct FlipState {
  bool dead = false;
  bool expect_bit = false;
  int last = -1;    // last instruction
  int stored = -1;  // last written bit
  auto key() const { return std::make_tuple(dead, expect_bit, last, stored); }
  bool operator<(const FlipState& o) const { return key() < o.key(); }

  FlipState next(int s) const {
    FlipState n = *this;
    if (dead) return n;
    if (!expect_bit) {
      if (s > kI) n.dead = true;
      else {
        n.last = s;
        n.expect_bit = true;
      }
      return n;
    }
    if (s < kBit0) {
      n.dead = true;
      return n;
    }
    int bit = s - kBit0;
    if (last == kR && stored >= 0 && bit != stored) {
      n.dead = true;
      return n;
    }
    if (last == kW) n.stored = bit;
    n.expect_bit = false;
    return n;
  }

  PredictiveLabel label() const {
    PredictiveLabel l;
    if (!expect_bit) {
      l.set(kW).set(kR).set(kI).set(5);
    } else if (last == kR && stored >= 0) {
      l.set(static_cast<size_t>(kBit0 + stored));
    } else {
      l.set(kBit0).set(kBit1);
    }
    return l;
  }
};

class FlipFlopLanguage final : public Language {
 public:
  explicit FlipFlopLanguage(FlipFlopMix mix)
      : Language("flipflop", "write/read/ignore instruction-bit pairs with consistent reads",
                 Alphabet({"w", "r", "i", "0", "1"}), LanguageKind::FlipFlop),
        mix_(mix) {
    if (mix.write < 0 || mix.read < 0 || mix.ignore < 0 || mix.write + mix.read + mix.ignore <= 0)
      throw std::invalid_argument("invalid flip-flop instruction mix");
    std::function<FlipState(const FlipState&, int)> step = [](const FlipState& s, int c) { return s.next(c); };
    std::function<bool(const FlipState&)> acc = [](const FlipState& s) { return !s.dead && !s.expect_bit; };
    dfa_ = minimize(dfa_from_step<FlipState>(alphabet(), FlipState{}, step, acc));
  }

  const Dfa* dfa() const override { return &dfa_; }

  class Cursor final : public LanguageCursor {
   public:
    std::unique_ptr<LanguageCursor> clone() const override { return std::make_unique<Cursor>(*this); }
    void push(int s) override {
      if (s < 0 || s > kBit1) throw std::invalid_argument("symbol index out of range");
      st_ = st_.next(s);
    }
    bool alive() const override { return !st_.dead; }
    bool accepting() const override { return !st_.dead && !st_.expect_bit; }
    PredictiveLabel label() const override { return st_.label(); }

   private:
    FlipState st_;
  };

  std::unique_ptr<LanguageCursor> cursor() const override { return std::make_unique<Cursor>(); }

  Word sample(Rng& rng, int min_len, int max_len) const override {
    check_range(min_len, max_len);
    int lo = (min_len + 1) / 2, hi = max_len / 2;
    if (lo > hi) throw std::invalid_argument("flipflop: no member with length in range");
    int pairs = pick(rng, lo, hi);
    std::discrete_distribution<int> instr({mix_.write, mix_.read, mix_.ignore});
    Word w;
    int stored = -1;
    for (int i = 0; i < pairs; ++i) {
      int op = instr(rng);
      int bit = pick(rng, 0, 1);
      if (op == kW) stored = bit;
      if (op == kR && stored >= 0) bit = stored;
      w.push_back(op);
      w.push_back(kBit0 + bit);
    }
    return w;
  }

 private:
  FlipFlopMix mix_;
  Dfa dfa_;
};

// ---------------------------------------------------------------- counters

class CounterLanguage : public Language {
 public:
  CounterLanguage(std::string id, std::string description, Alphabet a, CounterProgram prog)
      : Language(std::move(id), std::move(description), std::move(a), LanguageKind::Counter), prog_(std::move(prog)) {}
  const CounterProgram* counter_program() const override { return &prog_; }

 private:
  CounterProgram prog_;
};

CounterCondition tok(int s) { return {CounterCondition::Token, s, 0}; }
CounterCondition at_least(int c, int64_t v) { return {CounterCondition::AtLeast, c, v}; }
CounterCondition at_most(int c, int64_t v) { return {CounterCondition::AtMost, c, v}; }

PredictiveLabel only(std::initializer_list<int> syms) {
  PredictiveLabel l;
  for (int s : syms) l.set(static_cast<size_t>(s));
  return l;
}

// Shuffle of k Dyck-1 languages; k = 1 gives Dyck-1 with plain bracket names.
class ShuffleDyck final : public CounterLanguage {
 public:
  explicit ShuffleDyck(int k) : CounterLanguage(make_id(k), make_desc(k), make_alphabet(k), make_program(k)), k_(k) {}

  class Cursor final : public LanguageCursor {
   public:
    explicit Cursor(int k) : c_(static_cast<size_t>(k), 0) {}
    std::unique_ptr<LanguageCursor> clone() const override { return std::make_unique<Cursor>(*this); }
    void push(int s) override {
      if (s < 0 || static_cast<size_t>(s) >= 2 * c_.size()) throw std::invalid_argument("symbol index out of range");
      auto& c = c_[static_cast<size_t>(s / 2)];
      c += (s % 2 == 0) ? 1 : -1;
      if (c < 0) dead_ = true;
    }
    bool alive() const override { return !dead_; }
    bool accepting() const override {
      return !dead_ && std::all_of(c_.begin(), c_.end(), [](int64_t v) { return v == 0; });
    }
    PredictiveLabel label() const override {
      PredictiveLabel l;
      for (size_t i = 0; i < c_.size(); ++i) {
        l.set(2 * i);
        if (c_[i] > 0) l.set(2 * i + 1);
      }
      if (accepting()) l.set(2 * c_.size());
      return l;
    }

   private:
    std::vector<int64_t> c_;
    bool dead_ = false;
  };

  std::unique_ptr<LanguageCursor> cursor() const override { return std::make_unique<Cursor>(k_); }

  Word sample(Rng& rng, int min_len, int max_len) const override {
    check_range(min_len, max_len);
    std::vector<int> lengths;
    for (int L = min_len; L <= max_len; ++L)
      if (L % 2 == 0) lengths.push_back(L);
    if (lengths.empty()) throw std::invalid_argument(id() + ": no member with length in range");
    int L = pick_from(rng, lengths);
    std::vector<int64_t> c(static_cast<size_t>(k_), 0);
    int64_t depth = 0;
    Word w;
    for (int r = L; r > 0; --r) {
      std::vector<int> ok;
      for (int i = 0; i < k_; ++i) {
        if (depth + 1 <= r - 1) ok.push_back(2 * i);
        if (c[static_cast<size_t>(i)] > 0) ok.push_back(2 * i + 1);
      }
      int s = pick_from(rng, ok);
      int64_t d = s % 2 == 0 ? 1 : -1;
      c[static_cast<size_t>(s / 2)] += d;
      depth += d;
      w.push_back(s);
    }
    return w;
  }

 private:
  static std::string make_id(int k) { return k == 1 ? "dyck1" : "shuffle" + std::to_string(k); }
  static std::string make_desc(int k) {
    return k == 1 ? "balanced brackets of one type" : "shuffle of " + std::to_string(k) + " Dyck-1 languages";
  }
  static Alphabet make_alphabet(int k) {
    if (k == 1) return Alphabet({"(", ")"});
    std::vector<std::string> s;
    for (int i = 1; i <= k; ++i) {
      s.push_back("(" + std::to_string(i));
      s.push_back(")" + std::to_string(i));
    }
    return Alphabet(s);
  }
  static CounterProgram make_program(int k) {
    if (k < 1) throw std::invalid_argument("number of bracket types must be positive");
    CounterProgram p;
    p.increments.assign(static_cast<size_t>(2 * k), std::vector<int64_t>(static_cast<size_t>(k), 0));
    PredictiveLabel opens;
    for (int i = 0; i < k; ++i) {
      p.increments[static_cast<size_t>(2 * i)][static_cast<size_t>(i)] = 1;
      p.increments[static_cast<size_t>(2 * i + 1)][static_cast<size_t>(i)] = -1;
      opens.set(static_cast<size_t>(2 * i));
    }
    p.rules.push_back({{}, opens});
    CounterRule eos{{}, only({2 * k})};
    for (int i = 0; i < k; ++i) {
      p.rules.push_back({{at_least(i, 1)}, only({2 * i + 1})});
      eos.when.push_back(at_most(i, 0));
    }
    p.rules.push_back(eos);
    return p;
  }
  int k_;
};

// Prefix-notation boolean expressions with operators of arity 1..max_arity.
class BooleanExpr final : public CounterLanguage {
 public:
  explicit BooleanExpr(int max_arity)
      : CounterLanguage("boolean" + std::to_string(max_arity),
                        "prefix boolean expressions with operators up to arity " + std::to_string(max_arity),
                        make_alphabet(max_arity), make_program(max_arity)) {
    arity_ = arities(max_arity);
  }

  class Cursor final : public LanguageCursor {
   public:
    explicit Cursor(const std::vector<int>* ar) : ar_(ar) {}
    std::unique_ptr<LanguageCursor> clone() const override { return std::make_unique<Cursor>(*this); }
    void push(int s) override {
      if (s < 0 || static_cast<size_t>(s) >= ar_->size()) throw std::invalid_argument("symbol index out of range");
      if (pending_ <= 0) dead_ = true;
      pending_ += (*ar_)[static_cast<size_t>(s)] - 1;
    }
    bool alive() const override { return !dead_; }
    bool accepting() const override { return !dead_ && pending_ == 0; }
    PredictiveLabel label() const override {
      PredictiveLabel l;
      if (pending_ == 0) l.set(ar_->size());
      else
        for (size_t i = 0; i < ar_->size(); ++i) l.set(i);
      return l;
    }

   private:
    const std::vector<int>* ar_;
    int64_t pending_ = 1;
    bool dead_ = false;
  };

  std::unique_ptr<LanguageCursor> cursor() const override { return std::make_unique<Cursor>(&arity_); }

  Word sample(Rng& rng, int min_len, int max_len) const override {
    check_range(min_len, max_len);
    if (max_len < 1) throw std::invalid_argument(id() + ": no member with length in range");
    int L = pick(rng, std::max(1, min_len), max_len);
    int64_t pending = 1;
    Word w;
    for (int r = L; r > 0; --r) {
      std::vector<int> ok;
      for (size_t s = 0; s < arity_.size(); ++s) {
        int64_t np = pending + arity_[s] - 1;
        bool good = np <= r - 1 && (np > 0 || r == 1) && np >= 0;
        if (good) ok.push_back(static_cast<int>(s));
      }
      int s = pick_from(rng, ok);
      pending += arity_[static_cast<size_t>(s)] - 1;
      w.push_back(s);
    }
    return w;
  }

 private:
  static std::vector<int> arities(int max_arity) {
    if (max_arity != 3 && max_arity != 5) throw std::invalid_argument("boolean grammar supports arity 3 or 5");
    std::vector<int> a{0, 0, 1, 2, 2, 3};
    if (max_arity == 5) {
      a.push_back(4);
      a.push_back(5);
    }
    return a;
  }
  static Alphabet make_alphabet(int max_arity) {
    std::vector<std::string> s{"0", "1", "~", "&", "|", "?"};
    if (max_arity == 5) {
      s.push_back("#");
      s.push_back("$");
    }
    return Alphabet(s);
  }
  static CounterProgram make_program(int max_arity) {
    auto ar = arities(max_arity);
    CounterProgram p;
    for (int a : ar) p.increments.push_back({a - 1});
    PredictiveLabel content;
    for (size_t i = 0; i < ar.size(); ++i) content.set(i);
    p.rules.push_back({{at_most(0, -1)}, only({static_cast<int>(ar.size())})});
    p.rules.push_back({{at_least(0, 0)}, content});
    return p;
  }
  std::vector<int> arity_;
};

// a^n b^n ... with m distinct letters, n >= 1.
class EqualBlocks final : public CounterLanguage {
 public:
  explicit EqualBlocks(int m) : CounterLanguage(make_id(m), make_desc(m), make_alphabet(m), make_program(m)), m_(m) {}

  class Cursor final : public LanguageCursor {
   public:
    explicit Cursor(int m) : m_(m), c_(static_cast<size_t>(m), 0) {}
    std::unique_ptr<LanguageCursor> clone() const override { return std::make_unique<Cursor>(*this); }
    void push(int s) override {
      if (s < 0 || s >= m_) throw std::invalid_argument("symbol index out of range");
      if (dead_) return;
      if (s == phase_) {
        ++c_[static_cast<size_t>(s)];
        if (s > 0 && c_[static_cast<size_t>(s)] > c_[0]) dead_ = true;
      } else if (s == phase_ + 1 && c_[0] > 0 && (phase_ == 0 || c_[static_cast<size_t>(phase_)] == c_[0])) {
        phase_ = s;
        c_[static_cast<size_t>(s)] = 1;
      } else {
        dead_ = true;
      }
    }
    bool alive() const override { return !dead_; }
    bool accepting() const override { return !dead_ && phase_ == m_ - 1 && c_.back() == c_[0]; }
    PredictiveLabel label() const override {
      PredictiveLabel l;
      if (c_[0] == 0) return only({0});
      if (phase_ == 0) return only({0, 1});
      if (c_[static_cast<size_t>(phase_)] < c_[0]) return only({phase_});
      l.set(static_cast<size_t>(phase_ + 1));  // next letter, or EOS after the last block
      return l;
    }

   private:
    int m_;
    std::vector<int64_t> c_;
    int phase_ = 0;
    bool dead_ = false;
  };

  std::unique_ptr<LanguageCursor> cursor() const override { return std::make_unique<Cursor>(m_); }

  Word sample(Rng& rng, int min_len, int max_len) const override {
    check_range(min_len, max_len);
    int lo = std::max(1, (min_len + m_ - 1) / m_), hi = max_len / m_;
    if (lo > hi) throw std::invalid_argument(id() + ": no member with length in range");
    int n = pick(rng, lo, hi);
    Word w;
    for (int s = 0; s < m_; ++s) w.insert(w.end(), static_cast<size_t>(n), s);
    return w;
  }

 private:
  static std::string letters(int m) { return std::string("abcd").substr(0, static_cast<size_t>(m)); }
  static std::string make_id(int m) {
    std::string id;
    for (char c : letters(m)) id += std::string(1, c) + "n";
    return id;
  }
  static std::string make_desc(int m) {
    std::string d;
    for (char c : letters(m)) d += std::string(1, c) + "^n";
    return d + ", n >= 1";
  }
  static Alphabet make_alphabet(int m) {
    std::vector<std::string> s;
    for (char c : letters(m)) s.emplace_back(1, c);
    return Alphabet(s);
  }
  static CounterProgram make_program(int m) {
    CounterProgram p;
    const int a = 0, b = 1, c = 2, d = 3;
    if (m == 2) {
      p.increments = {{1}, {-1}};
      p.rules = {{{tok(a)}, only({a, b})}, {{tok(b), at_least(0, 1)}, only({b})}, {{tok(b), at_most(0, 0)}, only({2})}};
    } else if (m == 3) {
      p.increments = {{1, 0}, {-1, 1}, {0, -1}};
      p.rules = {{{tok(a)}, only({a, b})},
                 {{tok(b), at_least(0, 1)}, only({b})},
                 {{tok(b), at_most(0, 0)}, only({c})},
                 {{tok(c), at_least(1, 1)}, only({c})},
                 {{tok(c), at_most(1, 0)}, only({3})}};
    } else if (m == 4) {
      p.increments = {{1, 0, 0}, {-1, 1, 0}, {0, -1, 1}, {0, -1, -1}};
      p.rules = {{{tok(a)}, only({a, b})},
                 {{tok(b), at_least(0, 1)}, only({b})},
                 {{tok(b), at_most(0, 0)}, only({c})},
                 {{tok(c), at_least(1, 1)}, only({c})},
                 {{tok(c), at_most(1, 0)}, only({d})},
                 {{tok(d), at_least(2, 1)}, only({d})},
                 {{tok(d), at_most(2, 0)}, only({4})}};
    } else {
      throw std::invalid_argument("equal-block languages need 2 to 4 letters");
    }
    return p;
  }
  int m_;
};

// ---------------------------------------------------------------- bounded Dyck

class BoundedDyck final : public Language {
 public:
  BoundedDyck(int K, int h)
      : Language("bdyck-" + std::to_string(K) + "-" + std::to_string(h), "Dyck language with " + std::to_string(K) + " bracket types and depth at most " + std::to_string(h),
                 make_alphabet(K, h), LanguageKind::BoundedDyck),
        K_(K),
        h_(h) {}

  int K() const { return K_; }
  int h() const { return h_; }

  class Cursor final : public LanguageCursor {
   public:
    Cursor(int K, int h) : K_(K), h_(h) {}
    std::unique_ptr<LanguageCursor> clone() const override { return std::make_unique<Cursor>(*this); }
    void push(int s) override {
      if (s < 0 || s >= 2 * K_) throw std::invalid_argument("symbol index out of range");
      if (dead_) return;
      if (s % 2 == 0) {
        if (static_cast<int>(stack_.size()) >= h_) dead_ = true;
        else stack_.push_back(s / 2);
      } else if (stack_.empty() || stack_.back() != s / 2) {
        dead_ = true;
      } else {
        stack_.pop_back();
      }
    }
    bool alive() const override { return !dead_; }
    bool accepting() const override { return !dead_ && stack_.empty(); }
    PredictiveLabel label() const override {
      PredictiveLabel l;
      if (static_cast<int>(stack_.size()) < h_)
        for (int k = 0; k < K_; ++k) l.set(static_cast<size_t>(2 * k));
      if (stack_.empty()) l.set(static_cast<size_t>(2 * K_));
      else l.set(static_cast<size_t>(2 * stack_.back() + 1));
      return l;
    }

   private:
    int K_, h_;
    std::vector<int> stack_;
    bool dead_ = false;
  };

  std::unique_ptr<LanguageCursor> cursor() const override { return std::make_unique<Cursor>(K_, h_); }

  Word sample(Rng& rng, int min_len, int max_len) const override {
    check_range(min_len, max_len);
    std::vector<int> lengths;
    for (int L = min_len; L <= max_len; ++L)
      if (L % 2 == 0) lengths.push_back(L);
    if (lengths.empty()) throw std::invalid_argument("bdyck: no member with length in range");
    int L = pick_from(rng, lengths);
    std::vector<int> stack;
    Word w;
    for (int r = L; r > 0; --r) {
      std::vector<int> ok;
      int d = static_cast<int>(stack.size());
      if (d < h_ && d + 1 <= r - 1)
        for (int k = 0; k < K_; ++k) ok.push_back(2 * k);
      if (d > 0) ok.push_back(2 * stack.back() + 1);
      int s = pick_from(rng, ok);
      if (s % 2 == 0) stack.push_back(s / 2);
      else stack.pop_back();
      w.push_back(s);
    }
    return w;
  }

 private:
  static Alphabet make_alphabet(int K, int h) {
    if (K < 1 || h < 1) throw std::invalid_argument("bounded Dyck needs K >= 1 and h >= 1");
    std::vector<std::string> s;
    for (int k = 1; k <= K; ++k) {
      s.push_back("(" + std::to_string(k));
      s.push_back(")" + std::to_string(k));
    }
    return Alphabet(s);
  }
  int K_, h_;
};

}  // namespace

LanguagePtr make_regular_language(std::string id, std::string description, Dfa dfa) {
  return std::make_shared<RegularLanguage>(std::move(id), std::move(description), std::move(dfa), nullptr);
}

LanguagePtr make_bounded_dyck(int K, int h) { return std::make_shared<BoundedDyck>(K, h); }
LanguagePtr make_flipflop(FlipFlopMix mix) { return std::make_shared<FlipFlopLanguage>(mix); }
LanguagePtr make_mod_counter(int k) { return mod_language("mod" + std::to_string(k), k); }

std::optional<BoundedDyckInfo> bounded_dyck_info(const Language& lang) {
  if (auto* b = dynamic_cast<const BoundedDyck*>(&lang)) return BoundedDyckInfo{b->K(), b->h()};
  return std::nullopt;
}

LanguagePtr make_language(const std::string& id, const LanguageParams& params) {
  auto number_after = [&](const std::string& prefix) -> int {
    if (id.rfind(prefix, 0) != 0 || id.size() == prefix.size()) return -1;
    std::string rest = id.substr(prefix.size());
    if (rest.find_first_not_of("0123456789") != std::string::npos || rest.size() > 6) return -1;
    return std::stoi(rest);
  };
  if (int n = number_after("tomita"); n >= 0) return tomita(n);
  if (int n = number_after("d"); n >= 1) return dn_language(n);
  if (int n = number_after("mod"); n >= 0) return make_mod_counter(n);
  if (int n = number_after("shuffle"); n >= 0) {
    if (n < 2) throw std::invalid_argument("shuffle needs at least 2 bracket types");
    return std::make_shared<ShuffleDyck>(n);
  }
  if (int n = number_after("boolean"); n >= 0) return std::make_shared<BooleanExpr>(n);
  if (id == "parity") return mod_language("parity", 2);
  if (id == "aa-star") return unary_period(2);
  if (id == "aaaa-star") return unary_period(4);
  if (id == "abab-star") return abab_star();
  if (id == "chain-abcde") return chain_abcde();
  if (id == "ab-d-bc") return ab_d_bc();
  if (id == "ends-02") return ends_02();
  if (id == "flipflop") return make_flipflop(params.mix);
  if (id == "dyck1") return std::make_shared<ShuffleDyck>(1);
  if (id == "anbn") return std::make_shared<EqualBlocks>(2);
  if (id == "anbncn") return std::make_shared<EqualBlocks>(3);
  if (id == "anbncndn") return std::make_shared<EqualBlocks>(4);
  if (id == "bdyck") return make_bounded_dyck(params.K, params.h);
  if (id.rfind("bdyck-", 0) == 0) {
    int K = 0, h = 0;
    char tail = 0;
    if (std::sscanf(id.c_str(), "bdyck-%d-%d%c", &K, &h, &tail) == 2) return make_bounded_dyck(K, h);
  }
  throw std::invalid_argument("unknown language '" + id + "'");
}

std::vector<std::string> catalog_ids() {
  return {"tomita1", "tomita2", "tomita3", "tomita4", "tomita5", "tomita6", "tomita7",
          "d2", "d3", "d4", "d12", "parity", "aa-star", "aaaa-star", "abab-star",
          "chain-abcde", "ab-d-bc", "ends-02", "flipflop", "dyck1", "shuffle2", "shuffle4",
          "shuffle6", "boolean3", "boolean5", "anbn", "anbncn", "anbncndn", "bdyck"};
}

Word random_string(const Alphabet& alphabet, Rng& rng, int min_len, int max_len) {
  check_range(min_len, max_len);
  int L = pick(rng, min_len, max_len);
  std::uniform_int_distribution<int> sym(0, static_cast<int>(alphabet.size()) - 1);
  Word w(static_cast<size_t>(L));
  for (auto& s : w) s = sym(rng);
  return w;
}

std::vector<Sample> generate_samples(const Language& lang, int n, int min_len, int max_len, uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample count must be non-negative");
  Rng rng(seed);
  std::vector<Sample> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Sample s;
    s.word = lang.sample(rng, min_len, max_len);
    s.labels = lang.labels_along(s.word);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ssmc
