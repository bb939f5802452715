#include <algorithm>
#include <set>
#include <stdexcept>

#include "builders.hpp"
#include "ssmc/compiler.hpp"

namespace ssmc {

using namespace build;

namespace {

std::vector<int> joint_step(const std::vector<SetResetAutomaton>& comps,
                            const std::vector<std::map<std::vector<int>, int>>& wiring, const std::vector<int>& joint,
                            int symbol) {
  std::vector<int> next(joint.size());
  std::vector<int> key;
  for (size_t i = 0; i < comps.size(); ++i) {
    key.assign(joint.begin(), joint.begin() + static_cast<long>(i));
    key.push_back(symbol);
    auto it = wiring[i].find(key);
    if (it == wiring[i].end()) throw std::invalid_argument("wiring has no entry for a reachable state of component " + std::to_string(i));
    int s = it->second;
    if (s < 0 || s >= comps[i].num_symbols()) throw std::invalid_argument("wiring maps to an unknown symbol");
    next[i] = comps[i].step(joint[i], s);
  }
  return next;
}

std::vector<std::vector<int>> explore(const std::vector<SetResetAutomaton>& comps,
                                      const std::vector<std::map<std::vector<int>, int>>& wiring, size_t symbols) {
  std::vector<int> start(comps.size(), 0);
  std::set<std::vector<int>> seen{start};
  std::vector<std::vector<int>> order{start};
  for (size_t i = 0; i < order.size(); ++i)
    for (size_t s = 0; s < symbols; ++s) {
      auto n = joint_step(comps, wiring, order[i], static_cast<int>(s));
      if (seen.insert(n).second) order.push_back(n);
    }
  return order;
}

void shift(StagedCascade& s, int by) {
  s.token_offset += by;
  for (auto& o : s.code_offset) o += by;
  for (auto& o : s.prev_offset)
    if (o >= 0) o += by;
}

std::vector<Literal> state_is(Decoder& d, const StagedCascade& s, size_t comp, int value, int p) {
  return code_is(d, s.code_offset[comp] + 1, s.components[comp].code_bits(), value, p);
}

int mod_of(const Language& lang) {
  if (lang.id() == "parity") return 2;
  if (lang.id().rfind("mod", 0) == 0) return std::stoi(lang.id().substr(3));
  return 0;
}

}  // namespace

SsmModel compile_set_reset(const SetResetAutomaton& a, int p) {
  check_compile_precision(p);
  a.validate();
  std::vector<std::string> names;
  for (int s = 0; s < a.num_symbols(); ++s) {
    int t = a.reset_to[static_cast<size_t>(s)];
    names.push_back(t < 0 ? "keep" + std::to_string(s) : "set" + std::to_string(t) + "_" + std::to_string(s));
  }
  SsmModel m;
  m.precision = p;
  m.alphabet = Alphabet(names);
  for (int s = 0; s < a.num_symbols(); ++s) m.embedding.push_back(one_hot(s, a.num_symbols(), p));
  Decoder dec;
  for (int s = 0; s < a.num_symbols(); ++s) dec.add_rule(one_hot_is(dec, 0, s, p), s);
  m.layers.push_back(set_reset_layer(a, dec, a.num_symbols(), 0, p));
  // readout: the symbols that set the current state
  Decoder rd;
  int b = a.code_bits();
  for (int q = 0; q < a.num_states; ++q) rd.add_rule(code_is(rd, 1, b, q, p), q);
  rd.num_tags = a.num_states;
  m.readout.decoder = rd;
  m.readout.labels.resize(static_cast<size_t>(a.num_states));
  for (int s = 0; s < a.num_symbols(); ++s)
    if (a.reset_to[static_cast<size_t>(s)] > 0) m.readout.labels[static_cast<size_t>(a.reset_to[static_cast<size_t>(s)])].set(static_cast<size_t>(s));
  m.language = "set-reset";
  finish(m);
  return m;
}

int decode_set_reset_output(const Signal& z, int offset, const SetResetAutomaton& a) {
  int b = a.code_bits();
  int v = 0;
  FixedPoint half = FixedPoint::from_ratio(Integer(1), Integer(2), z.real.at(static_cast<size_t>(offset)).frac_bits());
  for (int j = 0; j < b; ++j)
    if (z.real.at(static_cast<size_t>(offset + 1 + j)) > half) v |= 1 << j;
  return v;
}

SsmModel compile_readout_last(const Alphabet& alphabet, int p) {
  check_compile_precision(p);
  int n = static_cast<int>(alphabet.size());
  SsmModel m;
  m.precision = p;
  m.alphabet = alphabet;
  for (int s = 0; s < n; ++s) m.embedding.push_back(one_hot(s, n, p));
  Decoder dec;
  for (int s = 0; s < n; ++s) dec.add_rule(one_hot_is(dec, 0, s, p), s);
  m.layers.push_back(readout_last_layer(n, dec, -1, n, 0, p));
  // readout: label {previous symbol}, or {EOS} at the first position
  Decoder rd;
  std::vector<Literal> none;
  for (int s = 0; s < n; ++s) {
    rd.add_rule(prev_is(rd, 0, s, p), s);
    none.push_back({prev_is(rd, 0, s, p)[0].atom, false});
  }
  rd.add_rule(none, n);
  rd.num_tags = n + 1;
  m.readout.decoder = rd;
  for (int s = 0; s <= n; ++s) {
    PredictiveLabel l;
    l.set(static_cast<size_t>(s));
    m.readout.labels.push_back(l);
  }
  m.language = "readout-last";
  finish(m);
  return m;
}

int decode_readout_last_output(const Signal& z, size_t n) {
  for (size_t s = 0; s < n; ++s)
    if (z.real.at(s).sign() > 0) return static_cast<int>(s);
  return -1;
}

StagedCascade cascade_start(const Alphabet& input, const SetResetAutomaton& first,
                            const std::map<std::vector<int>, int>& wiring, int p) {
  check_compile_precision(p);
  StagedCascade s;
  int n = static_cast<int>(input.size());
  s.model.precision = p;
  s.model.alphabet = input;
  for (int t = 0; t < n; ++t) s.model.embedding.push_back(one_hot(t, n, p));
  Decoder dec;
  for (int t = 0; t < n; ++t) dec.add_rule(one_hot_is(dec, 0, t, p), wiring.at({t}));
  s.model.layers.push_back(set_reset_layer(first, dec, n, 0, p));
  s.components = {first};
  s.wiring = {wiring};
  s.code_offset = {0};
  s.prev_offset = {-1};
  s.token_offset = 1 + first.code_bits();
  s.reachable = explore(s.components, s.wiring, input.size());
  return s;
}

StagedCascade cascade_compose(const StagedCascade& lower, const SetResetAutomaton& upper,
                              const std::map<std::vector<int>, int>& wiring) {
  StagedCascade s = lower;
  int p = s.model.precision;
  size_t i = s.components.size();
  size_t last = i - 1;
  // previous state of the newest lower component
  {
    int blocks = s.components[last].num_states;
    Decoder dec;
    for (int v = 0; v < blocks; ++v) dec.add_rule(state_is(dec, s, last, v, p), v);
    int in = s.model.output_dim();
    s.model.layers.push_back(readout_last_layer(blocks, dec, 0, in, s.model.output_polar(), p));
    shift(s, blocks);
    s.prev_offset[last] = 0;
  }
  // the upper component, driven by the previous joint state and the token
  {
    Decoder dec;
    std::set<std::vector<int>> keys;
    for (const auto& joint : s.reachable)
      for (size_t t = 0; t < s.model.alphabet.size(); ++t) {
        std::vector<int> key = joint;
        key.push_back(static_cast<int>(t));
        if (!keys.insert(key).second) continue;
        auto it = wiring.find(key);
        if (it == wiring.end()) throw std::invalid_argument("wiring has no entry for a reachable state");
        std::vector<Literal> when;
        for (size_t j = 0; j < i; ++j) when = concat(when, prev_is(dec, s.prev_offset[j], joint[j], p));
        when = concat(when, one_hot_is(dec, s.token_offset, static_cast<int>(t), p));
        dec.add_rule(when, it->second);
      }
    int in = s.model.output_dim();
    s.model.layers.push_back(set_reset_layer(upper, dec, in, s.model.output_polar(), p));
    shift(s, 1 + upper.code_bits());
    s.components.push_back(upper);
    s.wiring.push_back(wiring);
    s.code_offset.push_back(0);
    s.prev_offset.push_back(-1);
  }
  s.reachable = explore(s.components, s.wiring, s.model.alphabet.size());
  return s;
}

std::vector<int> decode_joint_state(const StagedCascade& s, const Signal& z) {
  std::vector<int> j;
  for (size_t i = 0; i < s.components.size(); ++i)
    j.push_back(decode_set_reset_output(z, s.code_offset[i], s.components[i]));
  return j;
}

SsmModel compile_star_free(const Dfa& dfa, int p, const std::optional<std::vector<PredictiveLabel>>& labels) {
  check_compile_precision(p);
  CascadeProgram prog = holonomy_decompose(dfa);
  const Dfa& md = prog.dfa;
  std::vector<PredictiveLabel> state_label(static_cast<size_t>(md.num_states()));
  if (labels) {
    if (labels->size() != static_cast<size_t>(dfa.num_states()))
      throw std::invalid_argument("label map needs one label per automaton state");
    // carry labels over to the minimal automaton
    std::vector<int> seen(static_cast<size_t>(md.num_states()), -1);
    std::vector<std::pair<int, int>> work{{dfa.start, md.start}};
    std::set<std::pair<int, int>> visited{work[0]};
    for (size_t k = 0; k < work.size(); ++k) {
      auto [q, r] = work[k];
      auto& slot = seen[static_cast<size_t>(r)];
      if (slot < 0) {
        slot = q;
        state_label[static_cast<size_t>(r)] = (*labels)[static_cast<size_t>(q)];
      } else if (state_label[static_cast<size_t>(r)] != (*labels)[static_cast<size_t>(q)]) {
        throw std::invalid_argument("label map distinguishes equivalent states");
      }
      for (size_t s = 0; s < md.alphabet.size(); ++s) {
        std::pair<int, int> n{dfa.step(q, static_cast<int>(s)), md.step(r, static_cast<int>(s))};
        if (visited.insert(n).second) work.push_back(n);
      }
    }
  } else {
    auto co = coreachable(md);
    for (int q = 0; q < md.num_states(); ++q) state_label[static_cast<size_t>(q)] = label_of_state(md, q, co);
  }
  StagedCascade s = cascade_start(md.alphabet, prog.components[0], prog.wiring[0], p);
  for (size_t i = 1; i < prog.components.size(); ++i) s = cascade_compose(s, prog.components[i], prog.wiring[i]);
  SsmModel m = s.model;
  Decoder rd;
  std::vector<PredictiveLabel> tags;
  for (const auto& joint : s.reachable) {
    const auto& label = state_label[static_cast<size_t>(prog.output.at(joint))];
    auto it = std::find(tags.begin(), tags.end(), label);
    int tag = static_cast<int>(it - tags.begin());
    if (it == tags.end()) tags.push_back(label);
    std::vector<Literal> when;
    for (size_t i = 0; i < s.components.size(); ++i) when = concat(when, state_is(rd, s, i, joint[i], p));
    rd.add_rule(when, tag);
  }
  rd.num_tags = static_cast<int>(tags.size());
  m.readout.kind = Readout::Predictive;
  m.readout.decoder = rd;
  m.readout.labels = tags;
  finish(m);
  return m;
}

SsmModel compile_flip_flop(int p) {
  check_compile_precision(p);
  auto lang = make_flipflop(FlipFlopMix::dense());
  enum { W, R, I, B0, B1 };
  SsmModel m;
  m.precision = p;
  m.alphabet = lang->alphabet();
  m.language = "flipflop";
  for (int t = 0; t < 5; ++t) m.embedding.push_back(one_hot(t, 5, p));
  // layer 1: last instruction (states q0, w, r, i)
  SetResetAutomaton instr{4, {1, 2, 3, -1}, {"none", "w", "r", "i"}};
  Decoder d1;
  d1.add_rule(one_hot_is(d1, 0, W, p), 0);
  d1.add_rule(one_hot_is(d1, 0, R, p), 1);
  d1.add_rule(one_hot_is(d1, 0, I, p), 2);
  d1.add_rule(one_hot_is(d1, 0, B0, p), 3);
  d1.add_rule(one_hot_is(d1, 0, B1, p), 3);
  m.layers.push_back(set_reset_layer(instr, d1, 5, 0, p));
  int code1 = 0, tok = 3;
  // layer 2: stored bit (states q0, 0, 1), written only after w
  SetResetAutomaton bit{3, {1, 2, -1}, {"none", "0", "1"}};
  Decoder d2;
  auto is_w = code_is(d2, code1 + 1, instr.code_bits(), 1, p);
  d2.add_rule(concat(one_hot_is(d2, tok, B0, p), is_w), 0);
  d2.add_rule(concat(one_hot_is(d2, tok, B1, p), is_w), 1);
  d2.default_tag = 2;
  m.layers.push_back(set_reset_layer(bit, d2, m.layers[0].output_dim(), 0, p));
  int code2 = 0;
  code1 += 3;
  tok += 3;
  Decoder rd;
  PredictiveLabel bits, instrs;
  bits.set(B0).set(B1);
  instrs.set(W).set(R).set(I).set(5);
  PredictiveLabel only0, only1;
  only0.set(B0);
  only1.set(B1);
  std::vector<PredictiveLabel> labels{bits, only0, only1, instrs};
  rd.add_rule(one_hot_is(rd, tok, W, p), 0);
  rd.add_rule(one_hot_is(rd, tok, I, p), 0);
  rd.add_rule(concat(one_hot_is(rd, tok, R, p), code_is(rd, code2 + 1, bit.code_bits(), 0, p)), 0);
  rd.add_rule(concat(one_hot_is(rd, tok, R, p), code_is(rd, code2 + 1, bit.code_bits(), 1, p)), 1);
  rd.add_rule(concat(one_hot_is(rd, tok, R, p), code_is(rd, code2 + 1, bit.code_bits(), 2, p)), 2);
  rd.add_rule(one_hot_is(rd, tok, B0, p), 3);
  rd.add_rule(one_hot_is(rd, tok, B1, p), 3);
  rd.num_tags = 4;
  m.readout.decoder = rd;
  m.readout.labels = labels;
  finish(m);
  return m;
}

SsmModel compile_counter_language(const Language& lang, int p) {
  check_compile_precision(p);
  const CounterProgram* prog = lang.counter_program();
  if (!prog) throw RefusalError(lang.id() + " is not a counter language");
  int n = static_cast<int>(lang.alphabet().size());
  int k = static_cast<int>(prog->num_counters());
  int L = prog->bound;
  int g = 2 * L + 1;
  SsmModel m;
  m.precision = p;
  m.alphabet = lang.alphabet();
  m.language = lang.id();
  for (int t = 0; t < n; ++t) m.embedding.push_back(one_hot(t, n, p));
  SsmLayer layer;
  layer.input_dim = n;
  layer.width = k * g;
  Decoder dec;
  for (int t = 0; t < n; ++t) dec.add_rule(one_hot_is(dec, 0, t, p), t);
  dec.num_tags = n;
  layer.decoder = dec;
  FixedVector ones(static_cast<size_t>(k * g), FixedPoint::from_int(1, p));
  for (int t = 0; t < n; ++t) {
    FixedVector inc;
    for (int c = 0; c < k; ++c)
      inc.insert(inc.end(), static_cast<size_t>(g),
                 FixedPoint::from_int(prog->increments[static_cast<size_t>(t)][static_cast<size_t>(c)], p));
    layer.gate.push_back(ones);
    layer.inc.push_back(inc);
    layer.gate_polar.emplace_back();
  }
  for (int c = 0; c < k; ++c) {
    auto off = counter_offsets(L, p);
    layer.h0.insert(layer.h0.end(), off.begin(), off.end());
    layer.norm_groups.push_back({c * g, g});
  }
  layer.normalize = true;
  layer.mix1.concat_input = true;
  m.layers.push_back(layer);
  int tok = k * g;
  Decoder rd;
  for (const auto& rule : prog->rules) {
    std::vector<Literal> when;
    for (const auto& c : rule.when) {
      switch (c.kind) {
        case CounterCondition::Token:
          when = concat(when, one_hot_is(rd, tok, c.index, p));
          break;
        case CounterCondition::AtLeast:
          when = concat(when, counter_at_least(rd, c.index * g, L, c.value, p));
          break;
        case CounterCondition::AtMost:
          when = concat(when, counter_at_most(rd, c.index * g, L, c.value, p));
          break;
      }
    }
    rd.add_rule(when, static_cast<int>(m.readout.labels.size()));
    m.readout.labels.push_back(rule.label);
  }
  rd.num_tags = static_cast<int>(m.readout.labels.size());
  m.readout.decoder = rd;
  finish(m);
  return m;
}

SsmModel compile_bounded_dyck(int K, int h, int p) {
  check_compile_precision(p);
  auto lang = make_bounded_dyck(K, h);
  int n = 2 * K;
  int tb = bits_for(n);
  int g = 2 * h + 1;
  SsmModel m;
  m.precision = p;
  m.alphabet = lang->alphabet();
  m.language = lang->id();
  for (int t = 0; t < n; ++t) m.embedding.push_back(code_vector(t, tb, p));
  FixedPoint zero = FixedPoint::from_int(0, p), one = FixedPoint::from_int(1, p);
  // layer 1: depth counter; the lowest token bit marks closing brackets
  {
    SsmLayer L;
    L.input_dim = tb;
    L.width = g;
    Decoder dec;
    dec.add_rule({gt(dec, 0, fx(1, 2, p), false)}, 0);
    dec.add_rule({gt(dec, 0, fx(1, 2, p), true)}, 1);
    dec.num_tags = 2;
    L.decoder = dec;
    L.gate = {FixedVector(static_cast<size_t>(g), one), FixedVector(static_cast<size_t>(g), one)};
    L.inc = {FixedVector(static_cast<size_t>(g), one), FixedVector(static_cast<size_t>(g), FixedPoint::from_int(-1, p))};
    L.gate_polar = {{}, {}};
    L.h0 = counter_offsets(h, p);
    L.normalize = true;
    L.mix1.concat_input = true;
    m.layers.push_back(L);
  }
  int depth = 0, tok = g;
  // layer 2: for every level, the last bracket seen at that level
  int sb = bits_for(n + 1);
  {
    SsmLayer L;
    L.input_dim = g + tb;
    L.width = 1 + h * sb;
    Decoder dec;
    auto tag_of = [&](int level, int s) { return 1 + (level - 1) * n + s; };
    for (int s = 0; s < n; ++s) {
      bool open = s % 2 == 0;
      for (int v = open ? 1 : 0; v <= (open ? h : h - 1); ++v) {
        int level = open ? v : v + 1;
        dec.add_rule(concat(code_is(dec, tok, tb, s, p), counter_equals(dec, depth, h, v, p)), tag_of(level, s));
      }
    }
    dec.num_tags = 1 + h * n;
    dec.default_tag = 0;
    L.decoder = dec;
    FixedVector keep_g{zero}, keep_i{one};
    keep_g.insert(keep_g.end(), static_cast<size_t>(h * sb), one);
    keep_i.insert(keep_i.end(), static_cast<size_t>(h * sb), zero);
    L.gate.push_back(keep_g);
    L.inc.push_back(keep_i);
    for (int level = 1; level <= h; ++level)
      for (int s = 0; s < n; ++s) {
        FixedVector gg = keep_g, ii = keep_i;
        auto code = code_vector(s + 1, sb, p);
        for (int j = 0; j < sb; ++j) {
          size_t at = static_cast<size_t>(1 + (level - 1) * sb + j);
          gg[at] = zero;
          ii[at] = code[static_cast<size_t>(j)];
        }
        L.gate.push_back(gg);
        L.inc.push_back(ii);
      }
    L.gate_polar.assign(L.gate.size(), {});
    L.h0 = keep_i;
    L.normalize = true;
    L.mix1.concat_input = true;
    m.layers.push_back(L);
  }
  int shift_by = 1 + h * sb;
  depth += shift_by;
  tok += shift_by;
  Decoder rd;
  PredictiveLabel opens;
  for (int k = 0; k < K; ++k) opens.set(static_cast<size_t>(2 * k));
  PredictiveLabel at_zero = opens;
  at_zero.set(static_cast<size_t>(n));
  rd.add_rule(counter_equals(rd, depth, h, 0, p), 0);
  m.readout.labels.push_back(at_zero);
  for (int v = 1; v <= h; ++v)
    for (int k = 0; k < K; ++k) {
      PredictiveLabel l = v < h ? opens : PredictiveLabel{};
      l.set(static_cast<size_t>(2 * k + 1));
      rd.add_rule(concat(counter_equals(rd, depth, h, v, p), code_is(rd, 1 + (v - 1) * sb, sb, 2 * k + 1, p)),
                  static_cast<int>(m.readout.labels.size()));
      m.readout.labels.push_back(l);
    }
  rd.num_tags = static_cast<int>(m.readout.labels.size());
  m.readout.decoder = rd;
  finish(m);
  return m;
}

SsmModel compile_mod_counter(int k, int p) {
  check_compile_precision(p);
  if (k < 2) throw std::invalid_argument("modulus must be at least 2");
  SsmModel m;
  m.precision = p;
  m.alphabet = Alphabet({"0", "1"});
  m.language = k == 2 ? "parity" : "mod" + std::to_string(k);
  m.embedding = {{FixedPoint::from_int(0, p)}, {FixedPoint::from_int(1, p)}};
  SsmLayer L;
  L.input_dim = 1;
  L.width = 0;
  L.polar_width = 1;
  Decoder dec;
  dec.add_rule({gt(dec, 0, fx(1, 2, p), false)}, 0);
  dec.add_rule({gt(dec, 0, fx(1, 2, p), true)}, 1);
  dec.num_tags = 2;
  L.decoder = dec;
  L.gate = {{}, {}};
  L.inc = {{}, {}};
  L.gate_polar = {{UnitRotation::identity()}, {UnitRotation(1, static_cast<uint64_t>(k))}};
  L.h0_polar = {UnitRotation::identity()};
  m.layers.push_back(L);
  Decoder rd;
  int atom = rd.add_atom({Atom::PhaseIs, 0, {}, UnitRotation::identity()});
  rd.add_rule({{atom, true}}, 0);
  rd.add_rule({{atom, false}}, 1);
  rd.num_tags = 2;
  m.readout.kind = Readout::Accept;
  m.readout.decoder = rd;
  m.readout.accept = {true, false};
  finish(m);
  return m;
}

SsmModel compile_signed_parity(int p) {
  check_compile_precision(p);
  SsmModel m;
  m.precision = p;
  m.alphabet = Alphabet({"0", "1"});
  m.language = "parity";
  m.embedding = {{FixedPoint::from_int(0, p)}, {FixedPoint::from_int(1, p)}};
  SsmLayer L;
  L.input_dim = 1;
  L.width = 1;
  Decoder dec;
  dec.add_rule({gt(dec, 0, fx(1, 2, p), false)}, 0);
  dec.add_rule({gt(dec, 0, fx(1, 2, p), true)}, 1);
  dec.num_tags = 2;
  L.decoder = dec;
  L.gate = {{FixedPoint::from_int(1, p)}, {FixedPoint::from_int(-1, p)}};
  L.inc = {{FixedPoint::from_int(0, p)}, {FixedPoint::from_int(0, p)}};
  L.gate_polar = {{}, {}};
  L.h0 = {FixedPoint::from_int(1, p)};
  m.layers.push_back(L);
  Decoder rd;
  rd.add_rule({gt(rd, 0, FixedPoint::from_int(0, p), true)}, 0);
  rd.add_rule({gt(rd, 0, FixedPoint::from_int(0, p), false)}, 1);
  rd.num_tags = 2;
  m.readout.kind = Readout::Accept;
  m.readout.decoder = rd;
  m.readout.accept = {true, false};
  finish(m);
  return m;
}

GateMode parse_gate_mode(const std::string& s) {
  if (s == "nonneg" || s == "nonnegative") return GateMode::Nonnegative;
  if (s == "signed") return GateMode::Signed;
  if (s == "rotation") return GateMode::Rotation;
  throw std::invalid_argument("unknown gate mode '" + s + "' (expected nonneg, signed or rotation)");
}

SsmModel compile_language(const Language& lang, GateMode gates, int p) {
  check_compile_precision(p);
  int k = mod_of(lang);
  if (gates == GateMode::Signed && k == 2) return compile_signed_parity(p);
  if (gates == GateMode::Rotation && k >= 2) return compile_mod_counter(k, p);
  switch (lang.kind()) {
    case LanguageKind::Regular: {
      if (!is_aperiodic(*lang.dfa())) {
        std::string hint;
        if (k == 2) hint = "; try --gates signed or --gates rotation";
        else if (k > 2) hint = "; try --gates rotation";
        throw RefusalError(lang.id() + " is not star-free: no nonnegative-gate model exists" + hint);
      }
      SsmModel m = compile_star_free(*lang.dfa(), p);
      m.language = lang.id();
      return m;
    }
    case LanguageKind::FlipFlop:
      return compile_flip_flop(p);
    case LanguageKind::Counter:
      return compile_counter_language(lang, p);
    case LanguageKind::BoundedDyck: {
      auto info = bounded_dyck_info(lang);
      return compile_bounded_dyck(info->K, info->h, p);
    }
  }
  throw RefusalError("unsupported language family");
}

}  // namespace ssmc
