#include "builders.hpp"

#include <stdexcept>

namespace ssmc::build {

void check_compile_precision(int p) {
  check_precision(p);
  if (p < kMinCompilePrecision)
    throw std::invalid_argument("constructions need at least " + std::to_string(kMinCompilePrecision) +
                                " fractional bits, got " + std::to_string(p));
}

FixedPoint fx(int64_t num, int64_t den, int p) {
  FixedPoint v = FixedPoint::from_ratio(Integer(num), Integer(den), p);
  if (fp_mul(v, FixedPoint::from_int(den, p)) != FixedPoint::from_int(num, p))
    throw std::logic_error("constant is not representable at this precision");
  return v;
}

int bits_for(int n) {
  int b = 0;
  while ((1 << b) < n) ++b;
  return std::max(b, 1);
}

FixedVector code_vector(int value, int bits, int p) {
  FixedVector v;
  for (int j = 0; j < bits; ++j) v.push_back(FixedPoint::from_int((value >> j) & 1, p));
  return v;
}

FixedVector one_hot(int index, int size, int p) {
  FixedVector v(static_cast<size_t>(size), FixedPoint::from_int(0, p));
  v[static_cast<size_t>(index)] = FixedPoint::from_int(1, p);
  return v;
}

Literal gt(Decoder& d, int coord, const FixedPoint& thr, bool positive) {
  return {d.add_atom({Atom::Greater, coord, thr, {}}), positive};
}

Literal ge(Decoder& d, int coord, const FixedPoint& thr, bool positive) {
  return {d.add_atom({Atom::GreaterEq, coord, thr, {}}), positive};
}

std::vector<Literal> one_hot_is(Decoder& d, int offset, int value, int p) {
  return {gt(d, offset + value, fx(1, 2, p))};
}

std::vector<Literal> code_is(Decoder& d, int offset, int bits, int value, int p) {
  std::vector<Literal> out;
  for (int j = 0; j < bits; ++j) out.push_back(gt(d, offset + j, fx(1, 2, p), ((value >> j) & 1) != 0));
  return out;
}

std::vector<Literal> prev_is(Decoder& d, int offset, int value, int p) {
  return {gt(d, offset + value, FixedPoint::from_int(0, p))};
}

int counter_slot(int o) { return o == 0 ? 0 : (o > 0 ? 2 * o - 1 : -2 * o); }

FixedVector counter_offsets(int L, int p) {
  FixedVector v{FixedPoint::from_int(0, p)};
  for (int k = 1; k <= L; ++k) {
    v.push_back(FixedPoint::from_int(k, p));
    v.push_back(FixedPoint::from_int(-k, p));
  }
  return v;
}

std::vector<Literal> counter_at_least(Decoder& d, int offset, int L, int64_t v, int p) {
  if (v < -L || v > L) throw std::logic_error("counter condition outside the decodable window");
  return {ge(d, offset + counter_slot(static_cast<int>(-v)), FixedPoint::from_int(0, p))};
}

std::vector<Literal> counter_at_most(Decoder& d, int offset, int L, int64_t v, int p) {
  auto l = counter_at_least(d, offset, L, v + 1, p);
  l[0].positive = false;
  return l;
}

std::vector<Literal> counter_equals(Decoder& d, int offset, int L, int64_t v, int p) {
  std::vector<Literal> out;
  if (v > -L) out = concat(out, counter_at_least(d, offset, L, v, p));
  if (v < L) out = concat(out, counter_at_most(d, offset, L, v, p));
  return out;
}

std::vector<Literal> concat(std::vector<Literal> a, const std::vector<Literal>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

SsmLayer set_reset_layer(const SetResetAutomaton& a, Decoder dec, int input_dim, int input_polar, int p) {
  a.validate();
  int b = a.code_bits();
  SsmLayer L;
  L.input_dim = input_dim;
  L.input_polar = input_polar;
  L.width = 1 + b;
  dec.num_tags = a.num_symbols();
  L.decoder = std::move(dec);
  FixedPoint zero = FixedPoint::from_int(0, p), one = FixedPoint::from_int(1, p);
  for (int s = 0; s < a.num_symbols(); ++s) {
    int t = a.reset_to[static_cast<size_t>(s)];
    FixedVector g{zero}, inc{one};
    if (t < 0) {
      g.insert(g.end(), static_cast<size_t>(b), one);
      inc.insert(inc.end(), static_cast<size_t>(b), zero);
    } else {
      g.insert(g.end(), static_cast<size_t>(b), zero);
      auto c = code_vector(t, b, p);
      inc.insert(inc.end(), c.begin(), c.end());
    }
    L.gate.push_back(g);
    L.inc.push_back(inc);
    L.gate_polar.emplace_back();
  }
  L.h0 = {one};
  auto c0 = code_vector(0, b, p);
  L.h0.insert(L.h0.end(), c0.begin(), c0.end());
  L.normalize = true;
  L.mix1.concat_input = true;
  return L;
}

SsmLayer readout_last_layer(int blocks, Decoder dec, int initial_block, int input_dim, int input_polar, int p) {
  SsmLayer L;
  L.input_dim = input_dim;
  L.input_polar = input_polar;
  L.width = 4 * blocks;
  dec.num_tags = blocks;
  L.decoder = std::move(dec);
  FixedPoint zero = FixedPoint::from_int(0, p), one = FixedPoint::from_int(1, p), quarter = fx(1, 4, p);
  FixedVector gate;
  for (int b = 0; b < blocks; ++b) gate.insert(gate.end(), {quarter, quarter, zero, zero});
  auto marks = [&](int current) {
    FixedVector v;
    for (int b = 0; b < blocks; ++b) {
      if (b == current) v.insert(v.end(), {one, zero, one, zero});
      else v.insert(v.end(), {zero, one, zero, one});
    }
    return v;
  };
  for (int t = 0; t < blocks; ++t) {
    L.gate.push_back(gate);
    L.inc.push_back(marks(t));
    L.gate_polar.emplace_back();
  }
  L.h0 = initial_block < 0 ? FixedVector(static_cast<size_t>(4 * blocks), zero) : marks(initial_block);
  L.mix2.kind = MixSpec::Affine;
  L.mix2.value.out_dim = blocks;
  for (int b = 0; b < blocks; ++b) {
    L.mix2.value.entries.push_back({b, 4 * b, one});
    L.mix2.value.entries.push_back({b, 4 * b + 2, FixedPoint::from_int(-1, p)});
  }
  L.mix2.value.bias.assign(static_cast<size_t>(blocks), fx(-1, 8, p));
  L.mix1.concat_input = true;
  return L;
}

void finish(SsmModel& m) {
  m.flags = infer_flags(m);
  validate_model(m);
}

}  // namespace ssmc::build
