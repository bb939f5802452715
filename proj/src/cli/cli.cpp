#include "ssmc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ssmc/compiler.hpp"
#include "ssmc/serialize.hpp"
#include "ssmc/simulate.hpp"
#include "ssmc/verify.hpp"

namespace ssmc {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int precision = 8;
  uint64_t seed = 0;
  std::string lang;
  std::string dfa;
  std::string gates = "nonneg";
  int K = 2;
  int h = 2;
  int bin = 0;
  std::string mode = "id";
  int exhaustive = -1;
  int random = -1;
  int min_len = -1;
  int max_len = -1;
  int count = 1000;
  std::string out;
  std::string format = "csv";
  std::string model_path;
  std::string word;
  size_t N = 10000;
  std::string pattern;
  bool snapshots = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

FlipFlopMix parse_mode(const std::string& mode) {
  if (mode == "id" || mode == "dense") return FlipFlopMix::dense();
  if (mode == "sparse") return FlipFlopMix::sparse();
  throw UsageError("unknown --mode '" + mode + "' (expected id or sparse)");
}

LanguagePtr resolve_language(const Options& o, const std::string& fallback = "") {
  if (!o.dfa.empty()) {
    Dfa d = parse_dfa_text(read_file(o.dfa));
    return make_regular_language(std::filesystem::path(o.dfa).stem().string(), "automaton from " + o.dfa, d);
  }
  std::string id = o.lang.empty() ? fallback : o.lang;
  if (id.empty()) throw UsageError("one of --lang or --dfa is required");
  return make_language(id, LanguageParams{o.K, o.h, parse_mode(o.mode)});
}

std::pair<int, int> length_range(const Options& o, int def_lo, int def_hi) {
  int lo = def_lo, hi = def_hi;
  if (o.bin != 0) {
    if (o.bin < 1 || o.bin > 3) throw UsageError("--bin must be 1, 2 or 3");
    lo = 1 + 50 * (o.bin - 1);
    hi = 50 * o.bin;
  }
  if (o.min_len >= 0) lo = o.min_len;
  if (o.max_len >= 0) hi = o.max_len;
  if (lo > hi) throw UsageError("empty length range");
  return {lo, hi};
}

int cmd_classify(const Options& o, std::ostream& out) {
  auto lang = resolve_language(o);
  const Dfa* d = lang->dfa();
  if (!d) throw UsageError(lang->id() + " is not a regular language");
  Dfa m = minimize(*d);
  size_t monoid = transition_monoid(m).size();
  bool sf = is_aperiodic(m);
  out << (sf ? "STAR-FREE" : "NON-STAR-FREE") << "  " << lang->id() << "  states=" << m.delta.size()
      << "  monoid=" << monoid << "\n";
  return sf ? kExitOk : kExitNegative;
}

int cmd_compile(const Options& o, std::ostream& out) {
  auto lang = resolve_language(o);
  SsmModel m = compile_language(*lang, parse_gate_mode(o.gates), o.precision);
  if (o.out.empty()) {
    out << dump_model(m);
    return kExitOk;
  }
  save_model(m, o.out);
  out << "compiled " << lang->id() << ": layers=" << m.layers.size() << " width=" << model_width(m)
      << " nonnegative=" << (m.flags.nonnegative ? "true" : "false")
      << " time_invariant=" << (m.flags.time_invariant ? "true" : "false") << " precision=" << m.precision
      << " -> " << o.out << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  SsmModel m = parse_model(read_file(o.model_path));
  auto lang = resolve_language(o, m.language);
  Strategy st;
  if (o.exhaustive >= 0 && o.random >= 0) throw UsageError("--exhaustive and --random are exclusive");
  if (o.exhaustive >= 0) {
    st = Strategy::exhaustive(o.exhaustive);
  } else {
    auto [lo, hi] = length_range(o, 1, 50);
    st = Strategy::random(o.random >= 0 ? o.random : 1000, lo, hi, o.seed);
  }
  VerificationReport r = check_equivalence(m, *lang, st);
  write_output(o, format_reports({r}, parse_report_format(o.format)), out);
  err << r.spec << " " << st.describe() << ": checked=" << r.checked << " mismatches=" << r.mismatch_count
      << (r.pass ? " PASS" : " FAIL") << "\n";
  return r.pass ? kExitOk : kExitNegative;
}

int cmd_demo_parity(const Options& o, std::ostream& out) {
  std::vector<SsmModel> models;
  if (!o.model_path.empty()) models.push_back(parse_model(read_file(o.model_path)));
  if (o.random > 0)
    for (int i = 0; i < o.random; ++i) models.push_back(random_nonneg_sample(o.seed + static_cast<uint64_t>(i), o.precision));
  if (models.empty()) throw UsageError("give a model file or --random <n>");
  nlohmann::json records = nlohmann::json::array();
  for (const auto& m : models) {
    Word pattern = o.pattern.empty() ? Word{} : m.alphabet.parse_word(o.pattern);
    ConvergenceRecord r = parity_convergence_demo(m, o.N, pattern, o.snapshots);
    out << r.model_id << "  pattern=" << r.pattern_text << "  stationarityStep="
        << (r.stationarity_step ? std::to_string(*r.stationarity_step) : "none") << "  seed=" << o.seed << "\n";
    records.push_back(convergence_to_json(r, m.precision));
  }
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + o.out);
    f << records.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_gen(const Options& o, std::ostream& out, std::ostream& err) {
  auto lang = resolve_language(o);
  auto [lo, hi] = length_range(o, 1, 50);
  if (o.count < 1) throw UsageError("--count must be positive");
  auto samples = generate_samples(*lang, o.count, lo, hi, o.seed);
  std::ostringstream ss;
  for (const auto& s : samples) {
    ss << lang->alphabet().format(s.word) << '\t';
    for (size_t i = 0; i < s.labels.size(); ++i) ss << (i ? "," : "") << label_to_string(s.labels[i], lang->alphabet());
    ss << '\n';
  }
  write_output(o, ss.str(), out);
  err << lang->id() << ": " << samples.size() << " words, lengths " << lo << ".." << hi << ", seed=" << o.seed << "\n";
  return kExitOk;
}

int cmd_trace(const Options& o, std::ostream& out) {
  SsmModel m = parse_model(read_file(o.model_path));
  Word w = m.alphabet.parse_word(o.word);
  Simulator sim(m);
  std::ostringstream ss;
  for (size_t t = 0; t < w.size(); ++t) {
    sim.step(w[t]);
    ss << "t=" << t + 1 << " symbol=" << m.alphabet.name(w[t]) << "\n";
    for (size_t l = 0; l < m.layers.size(); ++l) {
      ss << "  layer " << l + 1 << " tag=" << sim.layer_tag(l) << " h=" << to_string(sim.layer_state(l));
      for (const auto& r : sim.layer_polar_state(l)) ss << " rot=" << r.to_string();
      ss << " z=" << to_string(sim.layer_output(l).real) << "\n";
    }
    if (m.readout.kind == Readout::Predictive)
      ss << "  label=" << label_to_string(sim.label(), m.alphabet) << "\n";
    else
      ss << "  accept=" << (sim.accept() ? 1 : 0) << "\n";
  }
  write_output(o, ss.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Compile formal languages into finite-precision state space models and verify them"};
  app.set_help_flag("--help", "print help");  // -h would collide with --h
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  auto common = [&](CLI::App* c) {
    c->add_option("--precision", o.precision, "fractional bits p")->check(CLI::Range(kMinPrecision, kMaxPrecision));
    c->add_option("--seed", o.seed, "random seed");
  };
  auto language = [&](CLI::App* c) {
    c->add_option("--lang", o.lang, "catalog language id");
    c->add_option("--dfa", o.dfa, "automaton text file");
    c->add_option("--K", o.K, "bracket types for bdyck")->check(CLI::PositiveNumber);
    c->add_option("--h", o.h, "depth bound for bdyck")->check(CLI::PositiveNumber);
    c->add_option("--mode", o.mode, "flipflop instruction mix: id or sparse");
  };
  auto lengths = [&](CLI::App* c) {
    c->add_option("--bin", o.bin, "length bin 1=[1,50] 2=[51,100] 3=[101,150]");
    c->add_option("--min-len", o.min_len, "minimum length");
    c->add_option("--max-len", o.max_len, "maximum length");
  };

  auto* classify = app.add_subcommand("classify", "decide whether a regular language is star-free");
  common(classify);
  language(classify);

  auto* compile = app.add_subcommand("compile", "compile a language into a model file");
  common(compile);
  language(compile);
  compile->add_option("--gates", o.gates, "nonneg, signed or rotation");
  compile->add_option("--out", o.out, "output model file (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "compare a model with the language oracle");
  common(verify);
  language(verify);
  lengths(verify);
  verify->add_option("model", o.model_path, "model file")->required();
  verify->add_option("--exhaustive", o.exhaustive, "all valid prefixes up to this length");
  verify->add_option("--random", o.random, "number of random words");
  verify->add_option("--out", o.out, "report file (stdout if omitted)");
  verify->add_option("--format", o.format, "csv or json");

  auto* demo = app.add_subcommand("demo-parity", "look for stationarity on periodic inputs");
  common(demo);
  demo->add_option("model", o.model_path, "model file");
  demo->add_option("--random", o.random, "number of random nonnegative models");
  demo->add_option("--N", o.N, "input length");
  demo->add_option("--pattern", o.pattern, "repeated input block (default 1)");
  demo->add_flag("--snapshots", o.snapshots, "record every output in the JSON file");
  demo->add_option("--out", o.out, "JSON record file");

  auto* gen = app.add_subcommand("gen", "emit a labelled dataset");
  common(gen);
  language(gen);
  lengths(gen);
  gen->add_option("--count", o.count, "number of words");
  gen->add_option("--out", o.out, "dataset file (stdout if omitted)");

  auto* trace = app.add_subcommand("trace", "print per-layer activations for one word");
  common(trace);
  trace->add_option("model", o.model_path, "model file")->required();
  trace->add_option("--word", o.word, "input word")->required();
  trace->add_option("--out", o.out, "output file (stdout if omitted)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(o, out);
    if (compile->parsed()) return cmd_compile(o, out);
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (demo->parsed()) return cmd_demo_parity(o, out);
    if (gen->parsed()) return cmd_gen(o, out, err);
    if (trace->parsed()) return cmd_trace(o, out);
  } catch (const RefusalError& e) {
    err << "refused: " << e.what() << "\n";
    return kExitRefused;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace ssmc
