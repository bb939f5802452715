#pragma once

#include <vector>

#include "ssmc/compiler.hpp"

namespace ssmc::build {

void check_compile_precision(int p);
FixedPoint fx(int64_t num, int64_t den, int p);
int bits_for(int n);  // ceil(log2 n), at least 1
FixedVector code_vector(int value, int bits, int p);
FixedVector one_hot(int index, int size, int p);

Literal gt(Decoder& d, int coord, const FixedPoint& thr, bool positive = true);
Literal ge(Decoder& d, int coord, const FixedPoint& thr, bool positive = true);
std::vector<Literal> one_hot_is(Decoder& d, int offset, int value, int p);
std::vector<Literal> code_is(Decoder& d, int offset, int bits, int value, int p);
std::vector<Literal> prev_is(Decoder& d, int offset, int value, int p);

// Counter group of 2L+1 coordinates holding c + o for o in [0, 1, -1, ..., L, -L].
int counter_slot(int offset_value);
FixedVector counter_offsets(int L, int p);
std::vector<Literal> counter_at_least(Decoder& d, int offset, int L, int64_t v, int p);
std::vector<Literal> counter_at_most(Decoder& d, int offset, int L, int64_t v, int p);
std::vector<Literal> counter_equals(Decoder& d, int offset, int L, int64_t v, int p);

std::vector<Literal> concat(std::vector<Literal> a, const std::vector<Literal>& b);

// Decoder tags must be automaton symbols. Output: [normalized code (1 + bits); input].
SsmLayer set_reset_layer(const SetResetAutomaton& a, Decoder dec, int input_dim, int input_polar, int p);
// Decoder tags are the current block. Output: [block scores; input].
SsmLayer readout_last_layer(int blocks, Decoder dec, int initial_block, int input_dim, int input_polar, int p);

void finish(SsmModel& m);

}  // namespace ssmc::build
