#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ssmc/compiler.hpp"
#include "ssmc/simulate.hpp"
#include "ssmc/verify.hpp"

using namespace ssmc;

namespace {

const std::vector<std::string> kStarFree = {"tomita1", "tomita2", "tomita4",   "tomita7", "d2",     "d3",
                                            "d4",      "d12",     "chain-abcde", "ab-d-bc", "ends-02"};
const std::vector<std::string> kNotStarFree = {"parity", "aa-star", "aaaa-star", "abab-star",
                                               "tomita3", "tomita5", "tomita6"};

template <typename F>
void for_all_words(size_t k, int n, F f) {
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= n; ++len) {
    std::vector<Word> next;
    for (const auto& p : frontier)
      for (size_t s = 0; s < k; ++s) {
        Word x = p;
        x.push_back(static_cast<int>(s));
        f(x);
        next.push_back(std::move(x));
      }
    frontier = std::move(next);
  }
}

// Flip-flop instruction tracker: states q0, w, r, i over {w, r, i, 0, 1}.
SetResetAutomaton instruction_register() {
  SetResetAutomaton a;
  a.num_states = 4;
  a.reset_to = {1, 2, 3, -1, -1};
  return a;
}

// Staged cascades carry no readout yet; give them one so they can be simulated.
SsmModel runnable(SsmModel m) {
  m.readout.decoder = Decoder{};
  m.readout.decoder.num_tags = 1;
  m.readout.decoder.default_tag = 0;
  m.readout.labels = {PredictiveLabel{}};
  return m;
}

}  // namespace

TEST(SetReset, DecodesLastInstruction) {
  SetResetAutomaton a = instruction_register();
  SsmModel m = compile_set_reset(a, 8);
  ASSERT_EQ(m.layers.size(), 1u);
  EXPECT_EQ(m.layers[0].width, 1 + 2);
  Simulator sim(m);
  for (int s : {0, 4, 2, 3}) sim.step(s);  // w 1 i 0
  EXPECT_EQ(decode_set_reset_output(sim.output(), 0, a), 3);

  sim.reset();
  for (int s : {3, 4, 4, 3, 3}) {
    sim.step(s);
    EXPECT_EQ(decode_set_reset_output(sim.output(), 0, a), 0);
  }
}

TEST(SetReset, GateIsZeroOnCodeDimsForResets) {
  SetResetAutomaton a = instruction_register();
  SsmModel m = compile_set_reset(a, 8);
  const auto& L = m.layers[0];
  for (int s = 0; s < a.num_symbols(); ++s) {
    int tag = s;  // the decoder emits the symbol itself
    for (int j = 1; j < L.width; ++j) {
      if (a.reset_to[static_cast<size_t>(s)] >= 0) EXPECT_TRUE(L.gate[static_cast<size_t>(tag)][static_cast<size_t>(j)].is_zero());
      else EXPECT_EQ(L.gate[static_cast<size_t>(tag)][static_cast<size_t>(j)], FixedPoint::from_int(1, 8));
    }
  }
  EXPECT_TRUE(m.flags.nonnegative);
}

TEST(SetReset, MatchesAutomatonAndKeepsMargin) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    SetResetAutomaton a;
    a.num_states = 2 + static_cast<int>(rng() % 7);
    for (int q = 1; q < a.num_states; ++q) a.reset_to.push_back(q);
    for (int extra = static_cast<int>(rng() % 3); extra >= 0; --extra) a.reset_to.push_back(-1);
    std::shuffle(a.reset_to.begin(), a.reset_to.end(), rng);
    int syms = a.num_symbols();
    SsmModel m = compile_set_reset(a, 8);
    int b = a.code_bits();
    double bound = 1 / std::sqrt(1.0 + b) - 1.0 / 256;
    Simulator sim(m);
    int q = 0;
    for (int t = 0; t < 300; ++t) {
      int s = static_cast<int>(rng() % static_cast<uint64_t>(syms));
      sim.step(s);
      q = a.step(q, s);
      ASSERT_EQ(decode_set_reset_output(sim.output(), 0, a), q);
      for (int j = 0; j <= b; ++j) {
        const FixedPoint& z = sim.output().real[static_cast<size_t>(j)];
        if (!z.is_zero()) EXPECT_GE(z.to_double(), bound);
      }
    }
  }
}

TEST(ReadoutLast, IntervalsAndFirstPosition) {
  SsmModel m = compile_readout_last(Alphabet({"0", "1"}), 8);
  EXPECT_EQ(m.layers[0].width, 8);
  Simulator sim(m);
  sim.step(1);
  EXPECT_EQ(decode_readout_last_output(sim.output(), 2), -1);
  sim.step(0);
  // block of symbol 0 after "10"
  const FixedVector& h = sim.layer_state(0);
  EXPECT_GE(h[0].to_double(), 1.0);
  EXPECT_LE(h[0].to_double(), 1.25);
  EXPECT_GE(h[1].to_double(), 0.25);
  EXPECT_LE(h[1].to_double(), 0.5);
  EXPECT_EQ(h[2], FixedPoint::from_int(1, 8));
  EXPECT_TRUE(h[3].is_zero());

  sim.reset();
  sim.step(0);
  sim.step(0);
  EXPECT_GE(sim.layer_state(0)[1].to_double(), 0.0);
  EXPECT_LE(sim.layer_state(0)[1].to_double(), 0.125);

  Rng rng(8);
  Alphabet abc({"a", "b", "c"});
  SsmModel m3 = compile_readout_last(abc, 8);
  for (int i = 0; i < 50; ++i) {
    Word w = random_string(abc, rng, 2, 80);
    Simulator s3(m3);
    for (size_t t = 0; t < w.size(); ++t) {
      s3.step(w[t]);
      EXPECT_EQ(decode_readout_last_output(s3.output(), 3), t == 0 ? -1 : w[t - 1]);
    }
  }
}

TEST(Holonomy, CascadeReproducesAutomaton) {
  for (const auto& id : kStarFree) {
    auto lang = make_language(id);
    CascadeProgram c = holonomy_decompose(*lang->dfa());
    const Dfa& d = c.dfa;
    EXPECT_LE(c.components.size(), static_cast<size_t>(d.num_states())) << id;
    int n = lang->alphabet().size() <= 2 ? 10 : (lang->alphabet().size() <= 3 ? 7 : 5);
    size_t bad = 0;
    for_all_words(d.alphabet.size(), n, [&](const Word& w) {
      if (c.output.at(c.run(w)) != dfa_run(d, w)) ++bad;
    });
    EXPECT_EQ(bad, 0u) << id;
    for (const auto& comp : c.components) EXPECT_NO_THROW(comp.validate());
  }
}

TEST(Holonomy, TomitaOneHasOneComponent) {
  auto lang = make_language("tomita1");
  EXPECT_EQ(holonomy_decompose(*lang->dfa()).components.size(), 1u);
}

TEST(Holonomy, RefusesGroups) {
  for (const auto& id : kNotStarFree) {
    auto lang = make_language(id);
    EXPECT_THROW(holonomy_decompose(*lang->dfa()), RefusalError) << id;
    EXPECT_THROW(compile_star_free(*lang->dfa(), 8), RefusalError) << id;
    EXPECT_THROW(compile_language(*lang, GateMode::Nonnegative, 8), RefusalError) << id;
  }
}

TEST(Cascade, StagedDecodeMatchesDfaForD2) {
  auto lang = make_language("d2");
  CascadeProgram c = holonomy_decompose(*lang->dfa());
  ASSERT_GE(c.components.size(), 1u);
  StagedCascade s = cascade_start(c.dfa.alphabet, c.components[0], c.wiring[0], 8);
  for (size_t i = 1; i < c.components.size(); ++i) s = cascade_compose(s, c.components[i], c.wiring[i]);
  EXPECT_EQ(s.model.layers.size(), 2 * c.components.size() - 1);
  SsmModel m = runnable(s.model);
  for_all_words(2, 8, [&](const Word& w) {
    if (w.empty()) return;
    Simulator sim(m);
    for (int x : w) sim.step(x);
    EXPECT_EQ(c.output.at(decode_joint_state(s, sim.output())), dfa_run(c.dfa, w));
  });
}

TEST(Cascade, TrivialUpperKeepsLowerOutput) {
  SetResetAutomaton lower = instruction_register();
  SetResetAutomaton upper;
  upper.num_states = 2;
  upper.reset_to = {-1, 1};  // symbol 1 is never wired in
  std::map<std::vector<int>, int> w0, w1;
  for (int t = 0; t < 5; ++t) w0[{t}] = t;
  for (int q = 0; q < 4; ++q)
    for (int t = 0; t < 5; ++t) w1[{q, t}] = 0;
  Alphabet a({"w", "r", "i", "0", "1"});
  StagedCascade s0 = cascade_start(a, lower, w0, 8);
  StagedCascade s1 = cascade_compose(s0, upper, w1);
  EXPECT_EQ(s1.model.layers.size(), 3u);
  Rng rng(1);
  for (int i = 0; i < 30; ++i) {
    Word w = random_string(a, rng, 1, 40);
    SsmModel m0 = runnable(s0.model), m1 = runnable(s1.model);
    Simulator x(m0), y(m1);
    for (int c : w) {
      x.step(c);
      y.step(c);
      auto j = decode_joint_state(s1, y.output());
      EXPECT_EQ(j[0], decode_joint_state(s0, x.output())[0]);
      EXPECT_EQ(j[1], 0);
    }
  }
}

TEST(StarFree, LayerCountAndFlags) {
  for (const auto& id : kStarFree) {
    auto lang = make_language(id);
    CascadeProgram c = holonomy_decompose(*lang->dfa());
    SsmModel m = compile_star_free(*lang->dfa(), 8);
    EXPECT_EQ(m.layers.size(), 2 * c.components.size() - 1) << id;
    EXPECT_TRUE(m.flags.nonnegative) << id;
    for (const auto& L : m.layers)
      for (const auto& row : L.gate)
        for (const auto& g : row) EXPECT_TRUE(g.is_zero() || g == FixedPoint::from_int(1, 8) || g == FixedPoint::parse("0.25", 8));
  }
}

TEST(StarFree, TomitaFourExhaustive) {
  auto lang = make_language("tomita4");
  SsmModel m = compile_language(*lang, GateMode::Nonnegative, 8);
  auto r = check_equivalence(m, *lang, Strategy::exhaustive(12));
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.checked, 1000u);
}

TEST(StarFree, EndsZeroTwoLongWords) {
  auto lang = make_language("ends-02");
  SsmModel m = compile_language(*lang, GateMode::Nonnegative, 8);
  auto r = check_equivalence(m, *lang, Strategy::random(1000, 1, 500, 3));
  EXPECT_EQ(r.mismatch_count, 0u);
}

TEST(StarFree, CustomLabelMap) {
  auto lang = make_language("tomita4");
  const Dfa& d = *lang->dfa();
  std::vector<PredictiveLabel> accept_only;
  for (int q = 0; q < d.num_states(); ++q) {
    PredictiveLabel l;
    if (d.accepting[static_cast<size_t>(q)]) l.set(static_cast<size_t>(d.alphabet.eos()));
    accept_only.push_back(l);
  }
  SsmModel m = compile_star_free(d, 8, accept_only);
  for_all_words(2, 9, [&](const Word& w) {
    if (!w.empty()) EXPECT_EQ(recognize(m, w), dfa_accepts(d, w));
  });
  EXPECT_THROW(compile_star_free(d, 8, std::vector<PredictiveLabel>(1)), std::invalid_argument);
}

TEST(FlipFlop, Labels) {
  SsmModel m = compile_flip_flop(8);
  const Alphabet& a = m.alphabet;
  auto lbl = [&](const char* w) { return label_to_string(run_model(m, a.parse_word(w)).back(), a); };
  EXPECT_EQ(lbl("w 0 r"), "000100");
  EXPECT_EQ(lbl("w"), "000110");
  EXPECT_EQ(lbl("w 0 i"), "000110");
  EXPECT_EQ(lbl("i 1 r"), "000110");
  EXPECT_EQ(m.layers.size(), 2u);
  EXPECT_TRUE(m.flags.nonnegative);
}

TEST(Counter, LanguagesMatchOracles) {
  for (const char* id : {"dyck1", "shuffle2", "shuffle4", "shuffle6", "boolean3", "boolean5", "anbn", "anbncn",
                         "anbncndn"}) {
    auto lang = make_language(id);
    SsmModel m = compile_language(*lang, GateMode::Nonnegative, 8);
    auto r = check_equivalence(m, *lang, Strategy::random(200, 1, 150, 17));
    EXPECT_EQ(r.mismatch_count, 0u) << id;
    EXPECT_EQ(m.layers.size(), 1u) << id;
  }
  auto a4 = make_language("anbncndn");
  SsmModel m = compile_language(*a4, GateMode::Nonnegative, 8);
  Word w = a4->alphabet().parse_word("aabbccdd");
  EXPECT_EQ(run_model(m, w), a4->labels_along(w));
}

TEST(Counter, IncrementTables) {
  auto lang = make_language("anbncn");
  const CounterProgram* prog = lang->counter_program();
  ASSERT_NE(prog, nullptr);
  std::vector<std::vector<int64_t>> want = {{1, 0}, {-1, 1}, {0, -1}};
  EXPECT_EQ(prog->increments, want);
  EXPECT_EQ(prog->bound, 1);
  EXPECT_EQ(make_language("anbn")->counter_program()->increments, (std::vector<std::vector<int64_t>>{{1}, {-1}}));

  auto dy = make_language("dyck1");
  SsmModel dm = compile_language(*dy, GateMode::Nonnegative, 8);
  auto labels = run_model(dm, dy->alphabet().parse_word("( )"));
  EXPECT_EQ(label_to_string(labels[1], dy->alphabet()), "101");
}

TEST(BoundedDyck, Labels) {
  SsmModel m = compile_bounded_dyck(8, 10, 8);
  EXPECT_EQ(m.layers.size(), 2u);
  auto lang = make_bounded_dyck(8, 10);
  const Alphabet& a = lang->alphabet();
  PredictiveLabel got = run_model(m, a.parse_word("(1 (2 )2")).back();
  PredictiveLabel want;
  for (int k = 0; k < 8; ++k) want.set(static_cast<size_t>(a.index("(" + std::to_string(k + 1))));
  want.set(static_cast<size_t>(a.index(")1")));
  EXPECT_EQ(got, want);

  Word deep;
  for (int k = 0; k < 10; ++k) deep.push_back(a.index("(3"));
  PredictiveLabel full = run_model(m, deep).back();
  for (int k = 0; k < 8; ++k) EXPECT_FALSE(full.test(static_cast<size_t>(a.index("(" + std::to_string(k + 1)))));
  EXPECT_TRUE(full.test(static_cast<size_t>(a.index(")3"))));
  EXPECT_EQ(lang->predictive_label({}).count(), 9u);
}

TEST(BoundedDyck, WidthBound) {
  for (auto [K, h] : std::vector<std::pair<int, int>>{{2, 2}, {8, 10}, {16, 20}, {3, 5}}) {
    SsmModel m = compile_bounded_dyck(K, h, 8);
    int bits = 1;
    while ((1 << bits) < 2 * K) ++bits;
    EXPECT_LE(model_width(m), 2 * (2 * h + 1) + h * (1 + bits) + 2 * K + 4) << K << "," << h;
    auto lang = make_bounded_dyck(K, h);
    auto r = check_equivalence(m, *lang, Strategy::random(100, 1, 200, 5));
    EXPECT_EQ(r.mismatch_count, 0u) << K << "," << h;
  }
}

TEST(Rotation, ModCounters) {
  for (int k : {2, 3, 5, 7}) {
    SsmModel m = compile_mod_counter(k, 8);
    EXPECT_EQ(m.layers[0].polar_width, 1);
    Rng rng(static_cast<uint64_t>(k));
    for (int i = 0; i < 50; ++i) {
      Word w = random_string(m.alphabet, rng, 1, 3000);
      long ones = std::count(w.begin(), w.end(), 1);
      EXPECT_EQ(recognize(m, w), ones % k == 0);
    }
  }
  EXPECT_TRUE(infer_flags(compile_mod_counter(2, 8)).nonnegative == false);
}

TEST(Compile, GateModesAndRefusals) {
  auto par = make_language("parity");
  EXPECT_THROW(compile_language(*par, GateMode::Nonnegative, 8), RefusalError);
  SsmModel s = compile_language(*par, GateMode::Signed, 8);
  EXPECT_FALSE(s.flags.nonnegative);
  SsmModel r = compile_language(*par, GateMode::Rotation, 8);
  EXPECT_EQ(r.layers[0].polar_width, 1);
  EXPECT_EQ(parse_gate_mode("nonneg"), GateMode::Nonnegative);
  EXPECT_THROW(parse_gate_mode("complex-ish"), std::invalid_argument);
}

TEST(Compile, PrecisionFloor) {
  EXPECT_THROW(compile_flip_flop(3), std::invalid_argument);
  EXPECT_THROW(compile_star_free(*make_language("tomita4")->dfa(), 2), std::invalid_argument);
  EXPECT_NO_THROW(compile_flip_flop(kMinCompilePrecision));
}

TEST(Compile, EveryCatalogLanguageVerifies) {
  for (const auto& id : catalog_ids()) {
    auto lang = make_language(id);
    SsmModel m;
    try {
      m = compile_language(*lang, id == "parity" ? GateMode::Signed : GateMode::Nonnegative, 8);
    } catch (const RefusalError&) {
      continue;
    }
    auto r = check_equivalence(m, *lang, Strategy::random(100, 1, 80, 1));
    EXPECT_EQ(r.mismatch_count, 0u) << id;
    EXPECT_GT(r.checked, 0u) << id;
  }
}

TEST(Compile, LowerPrecisionStillExact) {
  for (const char* id : {"tomita7", "d3", "flipflop", "dyck1", "ends-02"}) {
    auto lang = make_language(id);
    SsmModel m = compile_language(*lang, GateMode::Nonnegative, kMinCompilePrecision);
    auto r = check_equivalence(m, *lang, Strategy::random(200, 1, 200, 2));
    EXPECT_EQ(r.mismatch_count, 0u) << id;
  }
}
