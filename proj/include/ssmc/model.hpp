#pragma once

#include <string>
#include <vector>

#include "ssmc/alphabet.hpp"
#include "ssmc/fixed_point.hpp"
#include "ssmc/rotation.hpp"

namespace ssmc {

// Layer input/output: real coordinates plus exact unit-rotation coordinates.
struct Signal {
  FixedVector real;
  std::vector<UnitRotation> polar;
  friend bool operator==(const Signal&, const Signal&) = default;
};

struct Atom {
  enum Kind { Greater, GreaterEq, PhaseIs };
  Kind kind = Greater;
  int coord = 0;           // index into Signal::real, or Signal::polar for PhaseIs
  FixedPoint threshold;    // Greater / GreaterEq
  UnitRotation phase;      // PhaseIs
};

struct Literal {
  int atom = 0;
  bool positive = true;
};

struct Rule {
  std::vector<Literal> when;  // conjunction; empty means always
  int tag = 0;
};

// Piecewise-constant map from a layer input to a finite tag.
struct Decoder {
  std::vector<Atom> atoms;
  std::vector<Rule> rules;
  int num_tags = 1;
  int default_tag = -1;  // used when no rule matches; -1 makes that an error
  std::vector<std::string> tag_names;

  int add_atom(const Atom& a);  // deduplicating
  void add_rule(std::vector<Literal> when, int tag) { rules.push_back({std::move(when), tag}); }
};

struct AffineMap {
  struct Entry {
    int row = 0;
    int col = 0;
    FixedPoint weight;
  };
  int out_dim = 0;
  std::vector<Entry> entries;
  FixedVector bias;  // empty means zero
};

struct MixSpec {
  enum Kind { Identity, Affine, Glu, SwiGlu };
  Kind kind = Identity;
  bool concat_input = false;  // operate on [v; x] instead of v
  AffineMap value;
  AffineMap gate;  // Glu / SwiGlu only
};

struct SsmLayer {
  int input_dim = 0;
  int input_polar = 0;
  int width = 0;        // real state coordinates
  int polar_width = 0;  // rotation state coordinates
  Decoder decoder;
  std::vector<FixedVector> gate;                      // [tag][width]
  std::vector<std::vector<UnitRotation>> gate_polar;  // [tag][polar_width]
  std::vector<FixedVector> inc;                       // [tag][width]
  FixedVector h0;
  std::vector<UnitRotation> h0_polar;
  MixSpec mix2;
  bool normalize = false;
  std::vector<std::pair<int, int>> norm_groups;  // (start, length); empty = whole vector
  MixSpec mix1;

  int mix2_out_dim() const;
  int output_dim() const;
  int output_polar() const { return polar_width + (mix1.concat_input ? input_polar : 0); }
};

struct Readout {
  enum Kind { Predictive, Accept };
  Kind kind = Predictive;
  Decoder decoder;
  std::vector<PredictiveLabel> labels;  // per tag; the prediction is the union over matching rules
  std::vector<bool> accept;             // per tag; accepted when any matching rule accepts
};

struct ModelFlags {
  bool nonnegative = false;
  bool time_invariant = false;
  friend bool operator==(const ModelFlags&, const ModelFlags&) = default;
};

struct SsmModel {
  int precision = 8;
  ModelFlags flags;
  Alphabet alphabet;
  std::vector<FixedVector> embedding;  // per content symbol
  std::vector<SsmLayer> layers;
  Readout readout;
  std::string language;  // informational

  int embedding_dim() const { return embedding.empty() ? 0 : static_cast<int>(embedding[0].size()); }
  int output_dim() const { return layers.empty() ? embedding_dim() : layers.back().output_dim(); }
  int output_polar() const { return layers.empty() ? 0 : layers.back().output_polar(); }
};

// Flags implied by the gate tables.
ModelFlags infer_flags(const SsmModel& m);
// Structural checks; also rejects declared flags that the gate tables contradict.
void validate_model(const SsmModel& m);
// Largest real state or output width over all layers.
int model_width(const SsmModel& m);

}  // namespace ssmc
