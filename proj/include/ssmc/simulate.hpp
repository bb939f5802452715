#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ssmc/model.hpp"

namespace ssmc {

// Runs a model one token at a time; keeps all buffers between steps.
class Simulator {
 public:
  explicit Simulator(const SsmModel& model);

  struct State {
    std::vector<FixedVector> h;
    std::vector<std::vector<UnitRotation>> hp;
    size_t t = 0;
  };

  void reset();
  void step(int symbol);
  State save() const { return state_; }
  void restore(const State& s) { state_ = s; }
  size_t time() const { return state_.t; }

  const Signal& output() const;
  const Signal& layer_output(size_t l) const { return z_[l]; }
  const FixedVector& layer_state(size_t l) const { return state_.h[l]; }
  const std::vector<UnitRotation>& layer_polar_state(size_t l) const { return state_.hp[l]; }
  int layer_tag(size_t l) const { return tags_[l]; }

  PredictiveLabel label() const;
  bool accept() const;
  // Accept bit, or EOS membership in the predicted label.
  bool member() const;

  const SsmModel& model() const { return m_; }

 private:
  int decode(const Decoder& d, const Signal& x, std::vector<char>& truth) const;
  void layer_step(size_t l, const Signal& x);

  const SsmModel& m_;
  State state_;
  std::vector<Signal> z_;
  std::vector<int> tags_;
  std::vector<int> first_tags_;  // layer-1 tag per symbol
  Signal embed_;
  std::vector<std::vector<char>> truth_;
  // decoding is a function of the atom truth vector alone
  static constexpr size_t kCacheLimit = 1 << 16;
  std::vector<std::unordered_map<std::string, int>> tag_cache_;
  mutable std::unordered_map<std::string, PredictiveLabel> label_cache_;
  mutable std::string key_;
  mutable std::vector<char> readout_truth_;
  FixedVector buf_u_, buf_v_, buf_w_;
};

std::vector<PredictiveLabel> run_model(const SsmModel& m, const Word& w);
// Accept/reject at the final position. Predictive models accept when EOS is predicted.
bool recognize(const SsmModel& m, const Word& w);
std::vector<bool> recognize_prefixes(const SsmModel& m, const Word& w);

struct TraceStep {
  int symbol = 0;
  std::vector<int> tags;
  std::vector<FixedVector> h;
  std::vector<std::vector<UnitRotation>> hp;
  std::vector<Signal> z;
};
std::vector<TraceStep> trace_model(const SsmModel& m, const Word& w);

// One recurrence step of a single layer; returns the new state and output.
struct LayerStepResult {
  FixedVector h;
  std::vector<UnitRotation> hp;
  Signal z;
  int tag = 0;
};
LayerStepResult layer_step(const SsmLayer& layer, const FixedVector& h_prev,
                           const std::vector<UnitRotation>& hp_prev, const Signal& x);

}  // namespace ssmc
