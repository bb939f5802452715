#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssmc/compiler.hpp"
#include "ssmc/serialize.hpp"
#include "ssmc/simulate.hpp"
#include "ssmc/verify.hpp"

using namespace ssmc;

namespace {

const std::vector<std::string> kStarFree = {"tomita1", "tomita2", "tomita4",   "tomita7", "d2",     "d3",
                                            "d4",      "d12",     "chain-abcde", "ab-d-bc", "ends-02"};

SsmModel geometric_model() {
  SsmModel m;
  m.alphabet = Alphabet({"0", "1"});
  m.embedding = {{FixedPoint::from_int(0, 8)}, {FixedPoint::from_int(1, 8)}};
  SsmLayer L;
  L.input_dim = 1;
  L.width = 1;
  L.decoder.num_tags = 1;
  L.decoder.default_tag = 0;
  L.gate = {{FixedPoint::parse("0.5", 8)}};
  L.inc = {{FixedPoint::parse("0.5", 8)}};
  L.gate_polar = {{}};
  L.h0 = {FixedPoint::from_int(0, 8)};
  m.layers.push_back(L);
  m.readout.kind = Readout::Accept;
  m.readout.decoder.num_tags = 1;
  m.readout.decoder.default_tag = 0;
  m.readout.accept = {true};
  m.flags = infer_flags(m);
  m.language = "geometric";
  return m;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Equivalence, FlipFlopPasses) {
  auto lang = make_language("flipflop");
  SsmModel m = compile_flip_flop(8);
  auto r = check_equivalence(m, *lang, Strategy::random(300, 1, 400, 9));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.mismatch_count, 0u);
  EXPECT_TRUE(r.mismatches.empty());
  EXPECT_GT(r.checked, 300u);
}

TEST(Equivalence, CorruptedGateIsCaught) {
  auto lang = make_language("flipflop");
  SsmModel m = compile_flip_flop(8);
  // the bit register forgets on every token
  for (auto& row : m.layers.back().gate)
    for (auto& g : row) g = FixedPoint::from_int(0, 8);
  auto r = check_equivalence(m, *lang, Strategy::random(200, 1, 100, 9));
  EXPECT_FALSE(r.pass);
  EXPECT_GE(r.mismatch_count, 1u);
  ASSERT_FALSE(r.mismatches.empty());
  EXPECT_LE(r.mismatches.size(), kMaxListedMismatches);
  EXPECT_NE(r.mismatches[0].expected, r.mismatches[0].got);
  EXPECT_GE(r.mismatches[0].position, 1u);
}

TEST(Equivalence, CorruptedAcceptModelIsCaught) {
  auto lang = make_language("parity");
  SsmModel m = compile_signed_parity(8);
  m.layers[0].gate[1][0] = FixedPoint::from_int(1, 8);
  EXPECT_FALSE(check_equivalence(m, *lang, Strategy::exhaustive(4)).pass);
}

TEST(Equivalence, ExhaustiveZeroIsVacuous) {
  auto lang = make_language("tomita4");
  SsmModel m = compile_language(*lang, GateMode::Nonnegative, 8);
  auto r = check_equivalence(m, *lang, Strategy::exhaustive(0));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.checked, 0u);
}

TEST(Equivalence, ExhaustiveCountsValidPrefixes) {
  auto lang = make_language("tomita2");
  SsmModel m = compile_language(*lang, GateMode::Nonnegative, 8);
  // (10)* has exactly one valid prefix of each length
  EXPECT_EQ(check_equivalence(m, *lang, Strategy::exhaustive(12)).checked, 12u);
  auto p = make_language("parity");
  SsmModel s = compile_signed_parity(8);
  EXPECT_EQ(check_equivalence(s, *p, Strategy::exhaustive(5)).checked, 62u);
}

TEST(Equivalence, AlphabetMismatch) {
  EXPECT_THROW(check_equivalence(compile_flip_flop(8), *make_language("tomita1"), Strategy::exhaustive(2)),
               std::invalid_argument);
}

TEST(Equivalence, Reproducible) {
  auto lang = make_language("shuffle2");
  SsmModel m = compile_language(*lang, GateMode::Nonnegative, 8);
  auto a = check_equivalence(m, *lang, Strategy::random(100, 1, 100, 77));
  auto b = check_equivalence(m, *lang, Strategy::random(100, 1, 100, 77));
  EXPECT_EQ(a, b);
  EXPECT_EQ(format_reports({a}, ReportFormat::Json), format_reports({b}, ReportFormat::Json));
}

TEST(Reports, CsvAndJson) {
  auto lang = make_language("tomita1");
  SsmModel m = compile_language(*lang, GateMode::Nonnegative, 8);
  auto r = check_equivalence(m, *lang, Strategy::exhaustive(12));
  std::string csv = reports_to_csv({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "spec,strategy,checked,mismatches,pass");
  EXPECT_EQ(csv, "spec,strategy,checked,mismatches,pass\ntomita1,exhaustive(n=12),12,0,true\n");

  auto t4 = make_language("tomita4");
  auto r2 = check_equivalence(compile_language(*t4, GateMode::Nonnegative, 8), *t4, Strategy::random(10, 1, 5, 1));
  std::string two = reports_to_csv({r, r2});
  EXPECT_EQ(std::count(two.begin(), two.end(), '\n'), 3);

  EXPECT_EQ(report_from_json(report_to_json(r2)), r2);
  VerificationReport bad = r2;
  bad.pass = false;
  bad.mismatch_count = 1;
  bad.mismatches.push_back({"0 1", 2, "110", "011"});
  EXPECT_EQ(report_from_json(report_to_json(bad)), bad);

  auto dir = std::filesystem::temp_directory_path() / "ssmc_test_verify";
  std::filesystem::create_directories(dir);
  auto path = (dir / "r.json").string();
  emit_report(r2, path, ReportFormat::Json);
  EXPECT_EQ(report_from_json(nlohmann::json::parse(slurp(path))), r2);
  emit_reports({r, r2}, (dir / "r.csv").string(), ReportFormat::Csv);
  EXPECT_EQ(slurp((dir / "r.csv").string()), two);
  EXPECT_THROW(emit_report(r, (dir / "missing" / "x.csv").string(), ReportFormat::Csv), std::runtime_error);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(parse_report_format("xml"), std::invalid_argument);
}

TEST(Convergence, GeometricModel) {
  SsmModel m = geometric_model();
  auto r = parity_convergence_demo(m, 10000);
  ASSERT_TRUE(r.stationarity_step.has_value());
  EXPECT_LE(*r.stationarity_step, 20u);
  EXPECT_EQ(r.final_output.real[0], FixedPoint::from_int(1, 8));
}

TEST(Convergence, FlipFlopIsImmediatelyStationary) {
  SsmModel m = compile_flip_flop(8);
  auto r = parity_convergence_demo(m, 10000, m.alphabet.parse_word("1"));
  ASSERT_TRUE(r.stationarity_step.has_value());
  EXPECT_LE(*r.stationarity_step, 2u);
}

TEST(Convergence, SnapshotsAfterStationarityAreIdentical) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    SsmModel m = random_nonneg_sample(seed);
    auto r = parity_convergence_demo(m, 3000, {}, true);
    ASSERT_EQ(r.snapshots.size(), 3000u);
    if (!r.stationarity_step) continue;
    size_t T = *r.stationarity_step;
    for (size_t t = T; t < r.snapshots.size(); ++t) EXPECT_EQ(r.snapshots[t].real, r.snapshots[T - 1].real);
    if (T > 1) EXPECT_NE(r.snapshots[T - 2].real, r.snapshots[T - 1].real);
  }
}

TEST(Convergence, SignedModelRefused) {
  EXPECT_THROW(parity_convergence_demo(compile_signed_parity(8), 100), RefusalError);
  EXPECT_THROW(parity_convergence_demo(compile_mod_counter(2, 8), 100), RefusalError);
}

TEST(Convergence, EscapingNonnegativityGivesPeriodicOutputs) {
  EXPECT_EQ(output_period(compile_signed_parity(8), {}, 100000, 16), 2u);
  for (size_t k : {2u, 3u, 5u, 7u}) {
    SsmModel m = compile_mod_counter(static_cast<int>(k), 8);
    EXPECT_EQ(output_period(m, {}, 100000, 16), k);
    EXPECT_FALSE(convergence_scan(m, 100000, {}, false).stationarity_step.has_value());
  }
}

TEST(Convergence, StarFreeModelsBecomeStationary) {
  for (const auto& id : kStarFree) {
    auto lang = make_language(id);
    SsmModel m = compile_language(*lang, GateMode::Nonnegative, 8);
    int b = lang->alphabet().size() > 1 ? 1 : 0;
    for (const Word& v : {Word{0}, Word{b}, Word{0, b}}) {
      auto r = parity_convergence_demo(m, 600, v);
      EXPECT_TRUE(r.stationarity_step.has_value()) << id;
    }
  }
}

TEST(Convergence, JsonRecord) {
  SsmModel m = geometric_model();
  auto r = parity_convergence_demo(m, 12, {}, true);
  auto j = convergence_to_json(r, 8);
  EXPECT_EQ(j["model"], "geometric");
  EXPECT_EQ(j["pattern"], "(1)^12");
  EXPECT_EQ(j["snapshots"].size(), 12u);
  EXPECT_EQ(j["snapshots"][0][0], "0.5");
  EXPECT_EQ(j["stationarityStep"], 9);
}

TEST(RandomModels, DeterministicAndNonnegative) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    SsmModel a = random_nonneg_sample(seed), b = random_nonneg_sample(seed);
    EXPECT_EQ(dump_model(a), dump_model(b));
    EXPECT_TRUE(a.flags.nonnegative);
    EXPECT_LE(a.layers.size(), 3u);
    for (const auto& L : a.layers) {
      EXPECT_LE(L.width, 8);
      for (const auto& row : L.gate)
        for (const auto& g : row) {
          EXPECT_GE(g.sign(), 0);
          EXPECT_LE(g, FixedPoint::from_int(1, 8));
        }
      for (const auto& row : L.inc)
        for (const auto& x : row) EXPECT_LE(x.to_double() * x.to_double(), 4.0);
    }
  }
  EXPECT_THROW(random_nonneg_model(1, 4, 2), std::invalid_argument);
  EXPECT_THROW(random_nonneg_model(1, 1, 9), std::invalid_argument);
}

TEST(RandomModels, NoneRecognizesParity) {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    auto s = parity_falsification(random_nonneg_sample(seed), 12, 500, 64, seed);
    EXPECT_FALSE(s.survived) << seed;
    EXPECT_FALSE(s.witness.empty());
  }
  // a model that does separate parity survives the search
  auto s = parity_falsification(compile_signed_parity(8), 10, 200, 64, 0);
  EXPECT_TRUE(s.survived);
}
