#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ssmc/dfa.hpp"
#include "ssmc/language.hpp"
#include "ssmc/model.hpp"

namespace ssmc {

// The requested language/gate combination is outside what the construction supports.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Constructions below this precision are rejected; the readout-last thresholds need it.
inline constexpr int kMinCompilePrecision = 4;

// Automaton whose every symbol either keeps the state or resets it to a fixed state.
// State 0 is the start state.
struct SetResetAutomaton {
  int num_states = 2;
  std::vector<int> reset_to;  // per symbol: target state in [1, num_states), or -1 to keep
  std::vector<std::string> state_names;

  int num_symbols() const { return static_cast<int>(reset_to.size()); }
  int step(int q, int s) const { return reset_to[static_cast<size_t>(s)] < 0 ? q : reset_to[static_cast<size_t>(s)]; }
  int code_bits() const;
  void validate() const;
};

// Cascade of set-reset components; component i reads the states of components < i
// before the current token, together with the token.
struct CascadeProgram {
  Dfa dfa;  // the minimal automaton represented
  std::vector<SetResetAutomaton> components;
  std::vector<std::map<std::vector<int>, int>> wiring;  // key: states of components < i, then the token
  std::map<std::vector<int>, int> output;              // reachable joint state -> automaton state

  std::vector<int> initial() const { return std::vector<int>(components.size(), 0); }
  std::vector<int> step(const std::vector<int>& joint, int symbol) const;
  std::vector<int> run(const Word& w) const;
  std::vector<std::vector<int>> reachable() const;
};

// Holonomy decomposition of an aperiodic automaton. Throws RefusalError otherwise.
CascadeProgram holonomy_decompose(const Dfa& dfa);
nlohmann::json cascade_to_json(const CascadeProgram& c);

// A cascade realised as an SSM, before a readout is attached.
struct StagedCascade {
  SsmModel model;
  std::vector<SetResetAutomaton> components;
  std::vector<std::map<std::vector<int>, int>> wiring;
  int token_offset = 0;
  std::vector<int> code_offset;  // per component: dummy coordinate, followed by the code bits
  std::vector<int> prev_offset;  // per component: previous-state block scores, or -1
  std::vector<std::vector<int>> reachable;  // joint states reachable from the start
};

// Single layer over a one-hot input alphabet whose symbols are the automaton symbols.
SsmModel compile_set_reset(const SetResetAutomaton& a, int precision);
int decode_set_reset_output(const Signal& z, int offset, const SetResetAutomaton& a);

// Single layer whose output marks the previous token; 4|alphabet| state dimensions.
SsmModel compile_readout_last(const Alphabet& alphabet, int precision);
// Previous symbol index, or -1 at the first position.
int decode_readout_last_output(const Signal& z, size_t alphabet_size);

StagedCascade cascade_start(const Alphabet& input, const SetResetAutomaton& first,
                            const std::map<std::vector<int>, int>& wiring, int precision);
StagedCascade cascade_compose(const StagedCascade& lower, const SetResetAutomaton& upper,
                              const std::map<std::vector<int>, int>& wiring);
std::vector<int> decode_joint_state(const StagedCascade& s, const Signal& z);

// Label per automaton state; defaults to the predictive label of the state.
SsmModel compile_star_free(const Dfa& dfa, int precision,
                           const std::optional<std::vector<PredictiveLabel>>& labels = std::nullopt);
SsmModel compile_flip_flop(int precision);
SsmModel compile_counter_language(const Language& lang, int precision);
SsmModel compile_bounded_dyck(int K, int h, int precision);
SsmModel compile_mod_counter(int k, int precision);
SsmModel compile_signed_parity(int precision);

enum class GateMode { Nonnegative, Signed, Rotation };
GateMode parse_gate_mode(const std::string& s);

// Dispatches on the language family; refuses unsupported combinations.
SsmModel compile_language(const Language& lang, GateMode gates, int precision);

}  // namespace ssmc
