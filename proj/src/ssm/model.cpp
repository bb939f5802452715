#include "ssmc/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace ssmc {

int Decoder::add_atom(const Atom& a) {
  for (size_t i = 0; i < atoms.size(); ++i) {
    const Atom& b = atoms[i];
    if (a.kind != b.kind || a.coord != b.coord) continue;
    if (a.kind == Atom::PhaseIs ? a.phase == b.phase : a.threshold == b.threshold) return static_cast<int>(i);
  }
  atoms.push_back(a);
  return static_cast<int>(atoms.size()) - 1;
}

namespace {

int mix_out_dim(const MixSpec& m, int v_dim, int x_dim) {
  int in = v_dim + (m.concat_input ? x_dim : 0);
  return m.kind == MixSpec::Identity ? in : m.value.out_dim;
}

void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("invalid model: " + where + ": " + what);
}

void check_p(const FixedPoint& v, int p, const std::string& where) {
  if (v.frac_bits() != p) fail(where, "value at precision " + std::to_string(v.frac_bits()) + ", model uses " + std::to_string(p));
}

void check_vec(const FixedVector& v, size_t n, int p, const std::string& where) {
  if (v.size() != n) fail(where, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  for (const auto& x : v) check_p(x, p, where);
}

void check_affine(const AffineMap& a, int in_dim, int p, const std::string& where) {
  if (a.out_dim <= 0) fail(where, "affine map needs a positive output dimension");
  for (const auto& e : a.entries) {
    if (e.row < 0 || e.row >= a.out_dim || e.col < 0 || e.col >= in_dim) fail(where, "affine entry out of range");
    check_p(e.weight, p, where);
  }
  if (!a.bias.empty()) check_vec(a.bias, static_cast<size_t>(a.out_dim), p, where + " bias");
}

void check_mix(const MixSpec& m, int v_dim, int x_dim, int p, const std::string& where) {
  if (m.kind == MixSpec::Identity) return;
  int in = v_dim + (m.concat_input ? x_dim : 0);
  check_affine(m.value, in, p, where);
  if (m.kind != MixSpec::Affine) {
    check_affine(m.gate, in, p, where + " gate");
    if (m.gate.out_dim != m.value.out_dim) fail(where, "gated mix branches differ in width");
  }
}

void check_decoder(const Decoder& d, int real_dim, int polar_dim, int p, const std::string& where) {
  if (d.num_tags < 1) fail(where, "decoder needs at least one tag");
  for (const auto& a : d.atoms) {
    if (a.kind == Atom::PhaseIs) {
      if (a.coord < 0 || a.coord >= polar_dim) fail(where, "phase atom coordinate out of range");
    } else {
      if (a.coord < 0 || a.coord >= real_dim) fail(where, "threshold atom coordinate out of range");
      check_p(a.threshold, p, where);
    }
  }
  for (const auto& r : d.rules) {
    if (r.tag < 0 || r.tag >= d.num_tags) fail(where, "rule tag out of range");
    for (const auto& l : r.when)
      if (l.atom < 0 || static_cast<size_t>(l.atom) >= d.atoms.size()) fail(where, "rule references unknown atom");
  }
  if (d.default_tag < -1 || d.default_tag >= d.num_tags) fail(where, "default tag out of range");
  if (!d.tag_names.empty() && d.tag_names.size() != static_cast<size_t>(d.num_tags))
    fail(where, "tag name list has wrong size");
}

}  // namespace

int SsmLayer::mix2_out_dim() const { return mix_out_dim(mix2, width, input_dim); }
int SsmLayer::output_dim() const { return mix_out_dim(mix1, mix2_out_dim(), input_dim); }

ModelFlags infer_flags(const SsmModel& m) {
  ModelFlags f{true, true};
  for (const auto& L : m.layers) {
    for (const auto& g : L.gate)
      for (const auto& v : g)
        if (v.sign() < 0) f.nonnegative = false;
    for (const auto& g : L.gate_polar)
      for (const auto& r : g)
        if (!r.is_identity()) f.nonnegative = false;
    for (size_t t = 1; t < L.gate.size(); ++t)
      if (L.gate[t] != L.gate[0]) f.time_invariant = false;
    for (size_t t = 1; t < L.gate_polar.size(); ++t)
      if (L.gate_polar[t] != L.gate_polar[0]) f.time_invariant = false;
  }
  return f;
}

void validate_model(const SsmModel& m) {
  check_precision(m.precision);
  int p = m.precision;
  if (m.alphabet.size() == 0) fail("alphabet", "empty");
  if (m.embedding.size() != m.alphabet.size()) fail("embedding", "needs one vector per symbol");
  int in_dim = m.embedding_dim();
  if (in_dim < 1) fail("embedding", "dimension must be positive");
  for (const auto& e : m.embedding) check_vec(e, static_cast<size_t>(in_dim), p, "embedding");
  int in_polar = 0;
  for (size_t l = 0; l < m.layers.size(); ++l) {
    const auto& L = m.layers[l];
    std::string where = "layer " + std::to_string(l + 1);
    if (L.input_dim != in_dim || L.input_polar != in_polar) fail(where, "input dimension does not match the layer below");
    if (L.width < 0 || L.polar_width < 0 || L.width + L.polar_width < 1) fail(where, "state width must be positive");
    check_decoder(L.decoder, in_dim, in_polar, p, where + " decoder");
    size_t T = static_cast<size_t>(L.decoder.num_tags);
    if (L.gate.size() != T || L.inc.size() != T || L.gate_polar.size() != T) fail(where, "tables need one row per tag");
    for (size_t t = 0; t < T; ++t) {
      check_vec(L.gate[t], static_cast<size_t>(L.width), p, where + " gate");
      check_vec(L.inc[t], static_cast<size_t>(L.width), p, where + " increment");
      if (L.gate_polar[t].size() != static_cast<size_t>(L.polar_width)) fail(where, "rotation gate row has wrong size");
    }
    check_vec(L.h0, static_cast<size_t>(L.width), p, where + " h0");
    if (L.h0_polar.size() != static_cast<size_t>(L.polar_width)) fail(where, "rotation h0 has wrong size");
    check_mix(L.mix2, L.width, in_dim, p, where + " mix2");
    int m2 = L.mix2_out_dim();
    if (m2 < 1 && L.polar_width == 0) fail(where, "mix2 output is empty");
    for (const auto& [s, n] : L.norm_groups)
      if (s < 0 || n < 1 || s + n > m2) fail(where, "normalization group out of range");
    check_mix(L.mix1, m2, in_dim, p, where + " mix1");
    in_dim = L.output_dim();
    in_polar = L.output_polar();
  }
  check_decoder(m.readout.decoder, in_dim, in_polar, p, "readout");
  size_t T = static_cast<size_t>(m.readout.decoder.num_tags);
  if (m.readout.kind == Readout::Predictive && m.readout.labels.size() != T) fail("readout", "needs one label per tag");
  if (m.readout.kind == Readout::Accept && m.readout.accept.size() != T) fail("readout", "needs one verdict per tag");
  ModelFlags f = infer_flags(m);
  if (m.flags.nonnegative && !f.nonnegative) fail("flags", "declared nonnegative but a gate entry is negative or rotating");
  if (m.flags.time_invariant && !f.time_invariant) fail("flags", "declared time-invariant but gates depend on the input");
}

int model_width(const SsmModel& m) {
  int w = m.embedding_dim();
  for (const auto& L : m.layers) w = std::max({w, L.width + L.polar_width, L.output_dim() + L.output_polar()});
  return w;
}

}  // namespace ssmc
