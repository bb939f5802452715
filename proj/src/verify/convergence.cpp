#include <algorithm>
#include <deque>
#include <stdexcept>

#include "../compiler/builders.hpp"
#include "ssmc/compiler.hpp"
#include "ssmc/simulate.hpp"
#include "ssmc/verify.hpp"

namespace ssmc {

namespace {

bool same(const Signal& a, const Signal& b) { return a.real == b.real && a.polar == b.polar; }

Word default_pattern(const SsmModel& m, const Word& pattern) {
  if (!pattern.empty()) return pattern;
  if (m.alphabet.contains("1")) return {m.alphabet.index("1")};
  return {0};
}

// Per coordinate: the value ranges seen on even and on odd probes.
class Separation {
 public:
  explicit Separation(size_t d) : lo_(2, FixedVector(d)), hi_(2, FixedVector(d)), seen_(2, false), alive_(d) {}

  // Returns false once no coordinate can separate the two classes.
  bool add(const FixedVector& z, int parity) {
    auto c = static_cast<size_t>(parity);
    if (!seen_[c]) {
      lo_[c] = hi_[c] = z;
      seen_[c] = true;
    } else {
      for (size_t j = 0; j < z.size(); ++j) {
        if (z[j] < lo_[c][j]) lo_[c][j] = z[j];
        if (z[j] > hi_[c][j]) hi_[c][j] = z[j];
      }
    }
    if (!seen_[0] || !seen_[1]) return true;
    alive_ = 0;
    for (size_t j = 0; j < z.size(); ++j)
      if (hi_[0][j] < lo_[1][j] || hi_[1][j] < lo_[0][j]) ++alive_;
    return alive_ > 0;
  }

 private:
  std::vector<FixedVector> lo_, hi_;
  std::vector<bool> seen_;
  size_t alive_;
};

}  // namespace

ConvergenceRecord convergence_scan(const SsmModel& model, size_t N, const Word& pattern_in, bool keep) {
  Word pattern = default_pattern(model, pattern_in);
  for (int s : pattern)
    if (s < 0 || static_cast<size_t>(s) >= model.alphabet.size()) throw std::invalid_argument("pattern symbol out of range");
  ConvergenceRecord r;
  r.model_id = model.language.empty() ? "model" : model.language;
  r.pattern = pattern;
  r.pattern_text = "(" + model.alphabet.format(pattern) + ")^" + std::to_string(N);
  r.steps = N;
  Simulator sim(model);
  size_t P = pattern.size();
  std::deque<Signal> window;
  size_t T = 1;
  for (size_t t = 1; t <= N; ++t) {
    sim.step(pattern[(t - 1) % P]);
    const Signal& z = sim.output();
    if (keep) r.snapshots.push_back(z);
    if (window.size() == P) {
      if (!same(window.front(), z)) T = t - P + 1;
      window.pop_front();
    }
    window.push_back(z);
  }
  if (!window.empty()) r.final_output = window.back();
  if (N > 0 && T + P <= N) r.stationarity_step = T;
  return r;
}

ConvergenceRecord parity_convergence_demo(const SsmModel& model, size_t N, const Word& pattern, bool keep) {
  if (!model.flags.nonnegative || !infer_flags(model).nonnegative)
    throw RefusalError("the convergence demonstrator only accepts models with nonnegative gates");
  return convergence_scan(model, N, pattern, keep);
}

nlohmann::json convergence_to_json(const ConvergenceRecord& r, int precision) {
  (void)precision;
  auto sig = [](const Signal& s) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& v : s.real) j.push_back(v.to_string());
    for (const auto& v : s.polar) j.push_back({{"rot", v.to_string()}});
    return j;
  };
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : r.snapshots) snaps.push_back(sig(s));
  nlohmann::json j = {{"model", r.model_id},
                      {"pattern", r.pattern_text},
                      {"steps", r.steps},
                      {"stationarityStep", nullptr},
                      {"finalOutput", sig(r.final_output)},
                      {"snapshots", snaps}};
  if (r.stationarity_step) j["stationarityStep"] = *r.stationarity_step;
  return j;
}

std::optional<size_t> output_period(const SsmModel& model, const Word& pattern_in, size_t N, size_t max_period) {
  Word pattern = default_pattern(model, pattern_in);
  Simulator sim(model);
  std::deque<Signal> window;
  std::vector<bool> ok(max_period + 1, true);
  for (size_t t = 1; t <= N; ++t) {
    sim.step(pattern[(t - 1) % pattern.size()]);
    const Signal& z = sim.output();
    for (size_t P = 1; P <= max_period && P <= window.size(); ++P)
      if (ok[P] && !same(window[window.size() - P], z)) ok[P] = false;
    window.push_back(z);
    if (window.size() > max_period) window.pop_front();
  }
  for (size_t P = 1; P <= max_period && P < N; ++P)
    if (ok[P]) return P;
  return std::nullopt;
}

SsmModel random_nonneg_model(uint64_t seed, int layers, int d, int p) {
  if (layers < 1 || layers > 3) throw std::invalid_argument("layers must be in [1, 3]");
  if (d < 1 || d > 8) throw std::invalid_argument("d must be in [1, 8]");
  Rng rng(seed);
  auto grid = [&](int lo, int hi, int den) {
    return build::fx(std::uniform_int_distribution<int>(lo, hi)(rng), den, p);
  };
  auto coin = [&] { return (rng() & 1) != 0; };
  auto random_affine = [&](int out, int in, bool bias_row) {
    AffineMap a;
    a.out_dim = out + (bias_row ? 1 : 0);
    for (int r = 0; r < out; ++r)
      for (int c = 0; c < in; ++c)
        if (coin()) a.entries.push_back({r, c, grid(-4, 4, 4)});
    a.bias.assign(static_cast<size_t>(a.out_dim), FixedPoint::from_int(0, p));
    for (int r = 0; r < out; ++r) a.bias[static_cast<size_t>(r)] = grid(-4, 4, 4);
    if (bias_row) a.bias.back() = FixedPoint::from_int(1, p);
    return a;
  };

  SsmModel m;
  m.precision = p;
  m.alphabet = Alphabet({"0", "1"});
  m.language = "random-nonneg-" + std::to_string(seed);
  m.embedding = {build::one_hot(0, 2, p), build::one_hot(1, 2, p)};
  int in_dim = 2;
  for (int l = 0; l < layers; ++l) {
    SsmLayer L;
    L.input_dim = in_dim;
    L.width = d;
    Decoder dec;
    if (l == 0) {
      dec.add_rule({build::gt(dec, 1, build::fx(1, 2, p))}, 1);
    } else {
      int c = std::uniform_int_distribution<int>(0, in_dim - 1)(rng);
      dec.add_rule({build::gt(dec, c, grid(-8, 8, 8))}, 1);
    }
    dec.num_tags = 2;
    dec.default_tag = 0;
    L.decoder = dec;
    for (int t = 0; t < 2; ++t) {
      FixedVector g, b;
      for (int i = 0; i < d; ++i) {
        g.push_back(grid(0, 8, 8));
        b.push_back(grid(-8, 8, 4));
      }
      L.gate.push_back(g);
      L.inc.push_back(b);
      L.gate_polar.push_back({});
    }
    for (int i = 0; i < d; ++i) L.h0.push_back(grid(-4, 4, 4));
    // the constant row keeps the normalized vector away from zero
    L.mix2.kind = MixSpec::Affine;
    if (coin()) {
      L.mix2.value.out_dim = d + 1;
      for (int i = 0; i < d; ++i) L.mix2.value.entries.push_back({i, i, FixedPoint::from_int(1, p)});
      L.mix2.value.bias.assign(static_cast<size_t>(d + 1), FixedPoint::from_int(0, p));
      L.mix2.value.bias.back() = FixedPoint::from_int(1, p);
    } else {
      L.mix2.value = random_affine(d, d, true);
    }
    L.normalize = true;
    if (coin()) {
      L.mix1.kind = MixSpec::Identity;
      L.mix1.concat_input = coin();
    } else {
      L.mix1.kind = MixSpec::Affine;
      L.mix1.value = random_affine(d, d + 1, false);
    }
    in_dim = L.output_dim();
    m.layers.push_back(std::move(L));
  }
  Decoder rd;
  rd.add_rule({build::gt(rd, 0, FixedPoint::from_int(0, p))}, 1);
  rd.num_tags = 2;
  rd.default_tag = 0;
  m.readout.kind = Readout::Accept;
  m.readout.decoder = rd;
  m.readout.accept = {false, true};
  build::finish(m);
  return m;
}

SsmModel random_nonneg_sample(uint64_t seed, int p) {
  Rng rng(seed ^ 0x5bd1e995u);
  int layers = 1 + static_cast<int>(rng() % 3);
  int d = 1 + static_cast<int>(rng() % 8);
  return random_nonneg_model(seed, layers, d, p);
}

ParitySearch parity_falsification(const SsmModel& model, int exhaustive_len, int random_count, int random_max_len,
                                  uint64_t seed) {
  if (model.alphabet.size() != 2) throw std::invalid_argument("parity search needs a binary alphabet");
  int one = model.alphabet.contains("1") ? model.alphabet.index("1") : 1;
  ParitySearch res;
  Separation sep(static_cast<size_t>(model.output_dim()));
  Simulator sim(model);
  auto probe = [&](const Word& w, int ones) {
    ++res.probes;
    if (sep.add(sim.output().real, ones & 1)) return false;
    res.witness = model.alphabet.format(w);
    return true;
  };

  Word w;
  for (int n = 1; n <= 64; ++n) {
    sim.step(one);
    w.push_back(one);
    if (probe(w, n)) return res;
  }

  // all strings up to exhaustive_len, depth first
  struct Frame {
    Simulator::State state;
    int next;
    int ones;
  };
  sim.reset();
  w.clear();
  std::vector<Frame> stack{{sim.save(), 0, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == 2 || static_cast<int>(w.size()) >= exhaustive_len) {
      stack.pop_back();
      if (!w.empty()) w.pop_back();
      continue;
    }
    int s = f.next++;
    sim.restore(f.state);
    sim.step(s);
    w.push_back(s);
    int ones = f.ones + (s == one);
    if (probe(w, ones)) return res;
    stack.push_back({sim.save(), 0, ones});
  }

  Rng rng(seed);
  for (int i = 0; i < random_count; ++i) {
    Word r = random_string(model.alphabet, rng, 1, random_max_len);
    sim.reset();
    for (int s : r) sim.step(s);
    if (probe(r, static_cast<int>(std::count(r.begin(), r.end(), one)))) return res;
  }
  res.survived = true;
  return res;
}

}  // namespace ssmc
