#include "ssmc/simulate.hpp"

#include <stdexcept>

namespace ssmc {

namespace {

bool eval_atom(const Atom& a, const FixedVector& xr, const std::vector<UnitRotation>& xp) {
  switch (a.kind) {
    case Atom::Greater:
      return xr[static_cast<size_t>(a.coord)].mantissa() > a.threshold.mantissa();
    case Atom::GreaterEq:
      return xr[static_cast<size_t>(a.coord)].mantissa() >= a.threshold.mantissa();
    case Atom::PhaseIs:
      return xp[static_cast<size_t>(a.coord)] == a.phase;
  }
  return false;
}

void eval_atoms(const Decoder& d, const FixedVector& xr, const std::vector<UnitRotation>& xp, std::vector<char>& truth) {
  truth.resize(d.atoms.size());
  for (size_t i = 0; i < d.atoms.size(); ++i) truth[i] = eval_atom(d.atoms[i], xr, xp);
}

bool rule_holds(const Rule& r, const std::vector<char>& truth) {
  for (const auto& l : r.when)
    if (static_cast<bool>(truth[static_cast<size_t>(l.atom)]) != l.positive) return false;
  return true;
}

int decode_with(const Decoder& d, const FixedVector& xr, const std::vector<UnitRotation>& xp, std::vector<char>& truth) {
  eval_atoms(d, xr, xp, truth);
  int tag = -1;
  for (const auto& r : d.rules) {
    if (!rule_holds(r, truth)) continue;
    if (tag < 0) tag = r.tag;
    else if (tag != r.tag) throw std::runtime_error("decoder regions overlap with different tags");
  }
  if (tag < 0) tag = d.default_tag;
  if (tag < 0) throw std::runtime_error("decoder does not cover the current input");
  return tag;
}

template <class T>
void copy_values(const std::vector<T>& src, std::vector<T>& dst) {
  if (dst.size() != src.size()) {
    dst = src;
    return;
  }
  for (size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
}

FixedPoint zero(int p) { return FixedPoint(Integer(0), p); }

const FixedPoint& input_at(const FixedVector& v, const FixedVector& x, int col) {
  size_t c = static_cast<size_t>(col);
  return c < v.size() ? v[c] : x[c - v.size()];
}

void apply_affine(const AffineMap& a, const FixedVector& v, const FixedVector& x, int p, FixedVector& out) {
  if (a.bias.empty()) out.assign(static_cast<size_t>(a.out_dim), zero(p));
  else out = a.bias;
  for (const auto& e : a.entries) {
    auto& o = out[static_cast<size_t>(e.row)];
    o = fp_add(o, fp_mul(e.weight, input_at(v, x, e.col)));
  }
}

void apply_mix(const MixSpec& m, const FixedVector& v, const FixedVector& x, int p, FixedVector& out, FixedVector& tmp) {
  const FixedVector empty;
  const FixedVector& xs = m.concat_input ? x : empty;
  switch (m.kind) {
    case MixSpec::Identity:
      out = v;
      out.insert(out.end(), xs.begin(), xs.end());
      return;
    case MixSpec::Affine:
      apply_affine(m.value, v, xs, p, out);
      return;
    case MixSpec::Glu:
    case MixSpec::SwiGlu:
      apply_affine(m.value, v, xs, p, out);
      apply_affine(m.gate, v, xs, p, tmp);
      for (size_t i = 0; i < out.size(); ++i) {
        FixedPoint s = fp_sigmoid(tmp[i]);
        if (m.kind == MixSpec::SwiGlu) s = fp_mul(tmp[i], s);
        out[i] = fp_mul(out[i], s);
      }
      return;
  }
}

void normalize_groups(const SsmLayer& L, FixedVector& u) {
  if (!L.normalize || u.empty()) return;
  if (L.norm_groups.empty()) {
    rms_norm_inplace(u.data(), u.size());
    return;
  }
  for (const auto& [s, n] : L.norm_groups) rms_norm_inplace(u.data() + s, static_cast<size_t>(n));
}

// Shared by Simulator and the free layer_step.
void advance_layer(const SsmLayer& L, int p, int tag, FixedVector& h, std::vector<UnitRotation>& hp,
                   const FixedVector& xr, const std::vector<UnitRotation>& xp, Signal& z, FixedVector& u,
                   FixedVector& tmp) {
  const auto& g = L.gate[static_cast<size_t>(tag)];
  const auto& b = L.inc[static_cast<size_t>(tag)];
  for (size_t i = 0; i < h.size(); ++i) fp_mul_add_into(h[i], g[i], b[i]);
  const auto& gp = L.gate_polar[static_cast<size_t>(tag)];
  for (size_t j = 0; j < hp.size(); ++j) hp[j] = rot_mul(gp[j], hp[j]);
  bool plain2 = L.mix2.kind == MixSpec::Identity && !L.mix2.concat_input;
  bool plain1 = L.mix1.kind == MixSpec::Identity && !L.mix1.concat_input;
  if (plain2 && plain1 && !L.normalize) {
    copy_values(h, z.real);
  } else {
    apply_mix(L.mix2, h, xr, p, u, tmp);
    normalize_groups(L, u);
    apply_mix(L.mix1, u, xr, p, z.real, tmp);
  }
  if (!L.mix1.concat_input) {
    copy_values(hp, z.polar);
  } else {
    z.polar = hp;
    z.polar.insert(z.polar.end(), xp.begin(), xp.end());
  }
}

}  // namespace

Simulator::Simulator(const SsmModel& model) : m_(model) {
  validate_model(m_);
  size_t n = m_.layers.size();
  z_.resize(n);
  tags_.assign(n, -1);
  truth_.resize(n);
  tag_cache_.resize(n);
  if (n > 0) {
    std::vector<char> truth;
    for (const auto& e : m_.embedding) first_tags_.push_back(decode_with(m_.layers[0].decoder, e, {}, truth));
  }
  reset();
}

void Simulator::reset() {
  state_.h.clear();
  state_.hp.clear();
  for (const auto& L : m_.layers) {
    state_.h.push_back(L.h0);
    state_.hp.push_back(L.h0_polar);
  }
  state_.t = 0;
}

void Simulator::step(int symbol) {
  if (symbol < 0 || static_cast<size_t>(symbol) >= m_.alphabet.size())
    throw std::invalid_argument("symbol index out of range");
  static const std::vector<UnitRotation> no_polar;
  const FixedVector* xr = &m_.embedding[static_cast<size_t>(symbol)];
  const std::vector<UnitRotation>* xp = &no_polar;
  for (size_t l = 0; l < m_.layers.size(); ++l) {
    const auto& L = m_.layers[l];
    int tag;
    if (l == 0) {
      tag = first_tags_[static_cast<size_t>(symbol)];
    } else {
      auto& truth = truth_[l];
      eval_atoms(L.decoder, *xr, *xp, truth);
      key_.assign(truth.begin(), truth.end());
      auto& cache = tag_cache_[l];
      auto it = cache.find(key_);
      if (it != cache.end()) {
        tag = it->second;
      } else {
        tag = decode_with(L.decoder, *xr, *xp, truth);
        if (cache.size() < kCacheLimit) cache.emplace(key_, tag);
      }
    }
    tags_[l] = tag;
    advance_layer(L, m_.precision, tag, state_.h[l], state_.hp[l], *xr, *xp, z_[l], buf_u_, buf_w_);
    xr = &z_[l].real;
    xp = &z_[l].polar;
  }
  if (m_.layers.empty()) {
    embed_.real = *xr;
    embed_.polar.clear();
  }
  ++state_.t;
}

const Signal& Simulator::output() const { return m_.layers.empty() ? embed_ : z_.back(); }

PredictiveLabel Simulator::label() const {
  if (m_.readout.kind != Readout::Predictive) throw std::logic_error("model has an accept/reject readout");
  if (state_.t == 0) throw std::logic_error("no output before the first token");
  const Signal& z = output();
  const auto& d = m_.readout.decoder;
  eval_atoms(d, z.real, z.polar, readout_truth_);
  key_.assign(readout_truth_.begin(), readout_truth_.end());
  if (auto it = label_cache_.find(key_); it != label_cache_.end()) return it->second;
  PredictiveLabel l;
  bool any = false;
  for (const auto& r : d.rules)
    if (rule_holds(r, readout_truth_)) {
      l |= m_.readout.labels[static_cast<size_t>(r.tag)];
      any = true;
    }
  if (!any) {
    if (d.default_tag < 0) throw std::runtime_error("readout does not cover the current output");
    l = m_.readout.labels[static_cast<size_t>(d.default_tag)];
  }
  if (label_cache_.size() < kCacheLimit) label_cache_.emplace(key_, l);
  return l;
}

bool Simulator::accept() const {
  if (m_.readout.kind != Readout::Accept) throw std::logic_error("model has a predictive readout, not accept/reject");
  if (state_.t == 0) throw std::logic_error("no output before the first token");
  const Signal& z = output();
  const auto& d = m_.readout.decoder;
  eval_atoms(d, z.real, z.polar, readout_truth_);
  bool any = false;
  for (const auto& r : d.rules)
    if (rule_holds(r, readout_truth_)) {
      if (m_.readout.accept[static_cast<size_t>(r.tag)]) return true;
      any = true;
    }
  if (!any && d.default_tag >= 0) return m_.readout.accept[static_cast<size_t>(d.default_tag)];
  return false;
}

std::vector<PredictiveLabel> run_model(const SsmModel& m, const Word& w) {
  Simulator sim(m);
  std::vector<PredictiveLabel> out;
  out.reserve(w.size());
  for (int s : w) {
    sim.step(s);
    out.push_back(sim.label());
  }
  return out;
}

bool Simulator::member() const {
  if (m_.readout.kind == Readout::Accept) return accept();
  return label().test(static_cast<size_t>(m_.alphabet.eos()));
}

bool recognize(const SsmModel& m, const Word& w) {
  if (w.empty()) throw std::invalid_argument("recognize needs a non-empty word");
  Simulator sim(m);
  for (int s : w) sim.step(s);
  return sim.member();
}

std::vector<bool> recognize_prefixes(const SsmModel& m, const Word& w) {
  Simulator sim(m);
  std::vector<bool> out;
  out.reserve(w.size());
  for (int s : w) {
    sim.step(s);
    out.push_back(sim.member());
  }
  return out;
}

std::vector<TraceStep> trace_model(const SsmModel& m, const Word& w) {
  Simulator sim(m);
  std::vector<TraceStep> out;
  for (int s : w) {
    sim.step(s);
    TraceStep st;
    st.symbol = s;
    for (size_t l = 0; l < m.layers.size(); ++l) {
      st.tags.push_back(sim.layer_tag(l));
      st.h.push_back(sim.layer_state(l));
      st.hp.push_back(sim.layer_polar_state(l));
      st.z.push_back(sim.layer_output(l));
    }
    out.push_back(std::move(st));
  }
  return out;
}

LayerStepResult layer_step(const SsmLayer& layer, const FixedVector& h_prev, const std::vector<UnitRotation>& hp_prev,
                           const Signal& x) {
  if (h_prev.size() != static_cast<size_t>(layer.width) || hp_prev.size() != static_cast<size_t>(layer.polar_width))
    throw std::invalid_argument("state width does not match the layer");
  if (x.real.size() != static_cast<size_t>(layer.input_dim) || x.polar.size() != static_cast<size_t>(layer.input_polar))
    throw std::invalid_argument("input width does not match the layer");
  int p = layer.h0.empty() ? (x.real.empty() ? 8 : x.real[0].frac_bits()) : layer.h0[0].frac_bits();
  LayerStepResult r;
  std::vector<char> truth;
  r.tag = decode_with(layer.decoder, x.real, x.polar, truth);
  r.h = h_prev;
  r.hp = hp_prev;
  FixedVector u, tmp;
  advance_layer(layer, p, r.tag, r.h, r.hp, x.real, x.polar, r.z, u, tmp);
  return r;
}

}  // namespace ssmc
