#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ssmc/simulate.hpp"
#include "ssmc/verify.hpp"

namespace ssmc {

namespace {

constexpr size_t kMaxWitnessSymbols = 400;

std::string witness(const Alphabet& a, const Word& w, size_t len) {
  if (len <= kMaxWitnessSymbols) return a.format(Word(w.begin(), w.begin() + static_cast<long>(len)));
  Word tail(w.begin() + static_cast<long>(len - kMaxWitnessSymbols), w.begin() + static_cast<long>(len));
  return "... " + a.format(tail);
}

class Checker {
 public:
  Checker(const SsmModel& m, const Language& lang, VerificationReport& r)
      : m_(m), lang_(lang), r_(r), sim_(m), predictive_(m.readout.kind == Readout::Predictive) {}

  // Compares the model and the oracle after the prefix w[0..len).
  void compare(const Word& w, size_t len, const LanguageCursor& cur) {
    ++r_.checked;
    if (predictive_) {
      PredictiveLabel want = cur.label();
      PredictiveLabel got = sim_.label();
      if (want != got) fail(w, len, label_to_string(want, lang_.alphabet()), label_to_string(got, lang_.alphabet()));
    } else {
      bool want = cur.alive() && cur.accepting();
      bool got = sim_.accept();
      if (want != got) fail(w, len, want ? "1" : "0", got ? "1" : "0");
    }
  }

  void compare_final(const Word& w) {
    ++r_.checked;
    bool want = lang_.member_oracle(w);
    bool got = sim_.accept();
    if (want != got) fail(w, w.size(), want ? "1" : "0", got ? "1" : "0");
  }

  void fail(const Word& w, size_t len, std::string want, std::string got) {
    ++r_.mismatch_count;
    if (r_.mismatches.size() < kMaxListedMismatches)
      r_.mismatches.push_back({witness(lang_.alphabet(), w, len), len, std::move(want), std::move(got)});
  }

  // Depth-first over prefixes; predictive models stay on valid prefixes.
  void dfs(Word& w, const LanguageCursor& cur, int bound) {
    if (static_cast<int>(w.size()) >= bound) return;
    auto saved = sim_.save();
    for (int s = 0; s < static_cast<int>(lang_.alphabet().size()); ++s) {
      auto next = cur.clone();
      next->push(s);
      if (predictive_ && !next->alive()) continue;
      sim_.restore(saved);
      sim_.step(s);
      w.push_back(s);
      compare(w, w.size(), *next);
      dfs(w, *next, bound);
      w.pop_back();
    }
  }

  void run_word(const Word& w, bool every_position) {
    sim_.reset();
    if (!predictive_ && !every_position) {
      for (int s : w) sim_.step(s);
      if (!w.empty()) compare_final(w);
      return;
    }
    auto cur = lang_.cursor();
    for (size_t i = 0; i < w.size(); ++i) {
      sim_.step(w[i]);
      cur->push(w[i]);
      compare(w, i + 1, *cur);
    }
  }

  Simulator& sim() { return sim_; }
  bool predictive() const { return predictive_; }

 private:
  const SsmModel& m_;
  const Language& lang_;
  VerificationReport& r_;
  Simulator sim_;
  bool predictive_;
};

}  // namespace

std::string Strategy::describe() const {
  std::ostringstream os;
  if (kind == Exhaustive) {
    os << "exhaustive(n=" << bound << ")";
  } else {
    os << "random(count=" << count << ";len=" << min_len << ".." << max_len << ";seed=" << seed;
    if (!every_position) os << ";final";
    os << ")";
  }
  return os.str();
}

VerificationReport check_equivalence(const SsmModel& model, const Language& lang, const Strategy& st) {
  if (!(model.alphabet == lang.alphabet()))
    throw std::invalid_argument("model alphabet does not match the language alphabet");
  VerificationReport r;
  r.spec = lang.id();
  r.strategy = st;
  Checker ck(model, lang, r);
  if (st.kind == Strategy::Exhaustive) {
    if (st.bound < 0) throw std::invalid_argument("exhaustive bound must be non-negative");
    Word w;
    ck.sim().reset();
    auto cur = lang.cursor();
    ck.dfs(w, *cur, st.bound);
  } else {
    if (st.count < 0) throw std::invalid_argument("random count must be non-negative");
    if (st.min_len < 0 || st.max_len < st.min_len) throw std::invalid_argument("bad length range");
    Rng rng(st.seed);
    for (int i = 0; i < st.count; ++i) {
      Word w = ck.predictive() ? lang.sample(rng, st.min_len, st.max_len)
                               : random_string(lang.alphabet(), rng, std::max(st.min_len, 1), st.max_len);
      ck.run_word(w, st.every_position);
    }
  }
  r.pass = r.mismatch_count == 0;
  return r;
}

nlohmann::json report_to_json(const VerificationReport& r) {
  nlohmann::json s;
  if (r.strategy.kind == Strategy::Exhaustive) {
    s = {{"kind", "exhaustive"}, {"bound", r.strategy.bound}};
  } else {
    s = {{"kind", "random"},
         {"count", r.strategy.count},
         {"lengthRange", {r.strategy.min_len, r.strategy.max_len}},
         {"seed", r.strategy.seed},
         {"everyPosition", r.strategy.every_position}};
  }
  nlohmann::json mm = nlohmann::json::array();
  for (const auto& m : r.mismatches)
    mm.push_back({{"word", m.word}, {"position", m.position}, {"expected", m.expected}, {"got", m.got}});
  return {{"spec", r.spec},     {"strategy", s},    {"checked", r.checked}, {"mismatchCount", r.mismatch_count},
          {"mismatches", mm}, {"pass", r.pass}};
}

VerificationReport report_from_json(const nlohmann::json& j) {
  VerificationReport r;
  r.spec = j.at("spec").get<std::string>();
  const auto& s = j.at("strategy");
  if (s.at("kind") == "exhaustive") {
    r.strategy = Strategy::exhaustive(s.at("bound").get<int>());
  } else {
    r.strategy = Strategy::random(s.at("count").get<int>(), s.at("lengthRange").at(0).get<int>(),
                                  s.at("lengthRange").at(1).get<int>(), s.at("seed").get<uint64_t>());
    r.strategy.every_position = s.value("everyPosition", true);
  }
  r.checked = j.at("checked").get<uint64_t>();
  r.mismatch_count = j.at("mismatchCount").get<uint64_t>();
  for (const auto& m : j.at("mismatches"))
    r.mismatches.push_back({m.at("word").get<std::string>(), m.at("position").get<size_t>(),
                            m.at("expected").get<std::string>(), m.at("got").get<std::string>()});
  r.pass = j.at("pass").get<bool>();
  return r;
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << "spec,strategy,checked,mismatches,pass\n";
  for (const auto& r : reports)
    os << r.spec << ',' << r.strategy.describe() << ',' << r.checked << ',' << r.mismatch_count << ','
       << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

ReportFormat parse_report_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown report format '" + s + "' (expected csv or json)");
}

std::string format_reports(const std::vector<VerificationReport>& reports, ReportFormat f) {
  if (f == ReportFormat::Csv) return reports_to_csv(reports);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return (reports.size() == 1 ? arr[0] : arr).dump(2) + "\n";
}

void emit_reports(const std::vector<VerificationReport>& reports, const std::string& path, ReportFormat f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path);
  out << format_reports(reports, f);
  if (!out) throw std::runtime_error("cannot write report to " + path);
}

void emit_report(const VerificationReport& report, const std::string& path, ReportFormat f) {
  emit_reports({report}, path, f);
}

}  // namespace ssmc
