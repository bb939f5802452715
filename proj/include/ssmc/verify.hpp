#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssmc/language.hpp"
#include "ssmc/model.hpp"

namespace ssmc {

struct Strategy {
  enum Kind { Exhaustive, Random };
  Kind kind = Random;
  int bound = 0;  // exhaustive: all valid prefixes (or strings) of length <= bound
  int count = 0;  // random
  int min_len = 1;
  int max_len = 50;
  uint64_t seed = 0;
  // Accept-readout models only: compare every prefix, not just the whole word.
  bool every_position = true;

  static Strategy exhaustive(int n) { return {Exhaustive, n, 0, 0, n, 0, true}; }
  static Strategy random(int count, int min_len, int max_len, uint64_t seed) {
    return {Random, 0, count, min_len, max_len, seed, true};
  }
  std::string describe() const;
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

struct Mismatch {
  std::string word;
  size_t position = 0;  // 1-based prefix length
  std::string expected;
  std::string got;
  friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

struct VerificationReport {
  std::string spec;
  Strategy strategy;
  uint64_t checked = 0;
  uint64_t mismatch_count = 0;
  std::vector<Mismatch> mismatches;  // first few, in enumeration order
  bool pass = true;
  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

inline constexpr size_t kMaxListedMismatches = 20;

// Predictive models are compared label by label on valid prefixes of the language.
// Accept models are compared on arbitrary strings (empty string excluded).
VerificationReport check_equivalence(const SsmModel& model, const Language& lang, const Strategy& strategy);

nlohmann::json report_to_json(const VerificationReport& r);
VerificationReport report_from_json(const nlohmann::json& j);
std::string reports_to_csv(const std::vector<VerificationReport>& reports);
enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(const std::string& s);
std::string format_reports(const std::vector<VerificationReport>& reports, ReportFormat f);
void emit_report(const VerificationReport& report, const std::string& path, ReportFormat f);
void emit_reports(const std::vector<VerificationReport>& reports, const std::string& path, ReportFormat f);

struct ConvergenceRecord {
  std::string model_id;
  Word pattern;
  std::string pattern_text;
  size_t steps = 0;
  std::optional<size_t> stationarity_step;
  std::vector<Signal> snapshots;  // top-layer z per step, when requested
  Signal final_output;
};

// Feeds pattern^* (N tokens) and finds the least T after which the top-layer output repeats
// with the pattern period. Refuses models whose gates are not all nonnegative.
ConvergenceRecord parity_convergence_demo(const SsmModel& model, size_t N, const Word& pattern = {},
                                          bool keep_snapshots = false);
// Same scan without the nonnegativity contract.
ConvergenceRecord convergence_scan(const SsmModel& model, size_t N, const Word& pattern, bool keep_snapshots);
nlohmann::json convergence_to_json(const ConvergenceRecord& r, int precision);

// Least P <= max_period with z_t == z_{t+P} for every t in [1, N-P]; none if no such P.
std::optional<size_t> output_period(const SsmModel& model, const Word& pattern, size_t N, size_t max_period);

// Binary alphabet {0,1}; all gates on the 1/8 grid in [0,1], increments on the 1/4 grid in [-2,2].
SsmModel random_nonneg_model(uint64_t seed, int layers, int d, int precision = 8);
// Layer count in [1,3] and width in [1,8] also drawn from the seed.
SsmModel random_nonneg_sample(uint64_t seed, int precision = 8);

struct ParitySearch {
  bool survived = false;  // some coordinate and threshold separated even from odd on every probe
  uint64_t probes = 0;
  std::string witness;  // a probe that ended the search
};

// Tries every top-layer coordinate under every threshold and orientation:
// 1^n for n <= 64, then all strings up to exhaustive_len, then random strings up to random_max_len.
ParitySearch parity_falsification(const SsmModel& model, int exhaustive_len = 16, int random_count = 10000,
                                  int random_max_len = 64, uint64_t seed = 0);

}  // namespace ssmc
