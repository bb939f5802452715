#include "ssmc/dfa.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ssmc {

void Dfa::validate() const {
  if (delta.empty()) throw std::invalid_argument("automaton has no states");
  if (accepting.size() != delta.size()) throw std::invalid_argument("accepting vector has wrong size");
  if (start < 0 || start >= num_states()) throw std::invalid_argument("start state out of range");
  for (const auto& row : delta) {
    if (row.size() != alphabet.size()) throw std::invalid_argument("transition row has wrong size");
    for (int t : row)
      if (t < 0 || t >= num_states()) throw std::invalid_argument("transition target out of range");
  }
  if (!state_names.empty() && state_names.size() != delta.size())
    throw std::invalid_argument("state name list has wrong size");
}

int dfa_run_from(const Dfa& dfa, int q, const Word& w) {
  for (int s : w) {
    if (s < 0 || static_cast<size_t>(s) >= dfa.alphabet.size())
      throw std::invalid_argument("symbol index out of range");
    q = dfa.step(q, s);
  }
  return q;
}

int dfa_run(const Dfa& dfa, const Word& w) { return dfa_run_from(dfa, dfa.start, w); }

bool dfa_accepts(const Dfa& dfa, const Word& w) {
  return dfa.accepting[static_cast<size_t>(dfa_run(dfa, w))];
}

std::vector<bool> coreachable(const Dfa& dfa) {
  size_t n = dfa.delta.size();
  std::vector<std::vector<int>> rev(n);
  for (size_t q = 0; q < n; ++q)
    for (int t : dfa.delta[q]) rev[static_cast<size_t>(t)].push_back(static_cast<int>(q));
  std::vector<bool> co(n, false);
  std::deque<int> work;
  for (size_t q = 0; q < n; ++q)
    if (dfa.accepting[q]) {
      co[q] = true;
      work.push_back(static_cast<int>(q));
    }
  while (!work.empty()) {
    int q = work.front();
    work.pop_front();
    for (int p : rev[static_cast<size_t>(q)])
      if (!co[static_cast<size_t>(p)]) {
        co[static_cast<size_t>(p)] = true;
        work.push_back(p);
      }
  }
  return co;
}

PredictiveLabel label_of_state(const Dfa& dfa, int q, const std::vector<bool>& co) {
  PredictiveLabel l;
  for (size_t s = 0; s < dfa.alphabet.size(); ++s)
    if (co[static_cast<size_t>(dfa.step(q, static_cast<int>(s)))]) l.set(s);
  if (dfa.accepting[static_cast<size_t>(q)]) l.set(dfa.alphabet.size());
  return l;
}

PredictiveLabel predictive_label_regular(const Dfa& dfa, const Word& prefix) {
  auto co = coreachable(dfa);
  int q = dfa_run(dfa, prefix);
  if (!co[static_cast<size_t>(q)])
    throw std::invalid_argument("not a valid prefix: " + dfa.alphabet.format(prefix));
  return label_of_state(dfa, q, co);
}

Dfa minimize(const Dfa& dfa) {
  dfa.validate();
  size_t k = dfa.alphabet.size();
  // reachable states in BFS order from start
  std::vector<int> order{dfa.start};
  std::vector<int> seen(dfa.delta.size(), -1);
  seen[static_cast<size_t>(dfa.start)] = 0;
  for (size_t i = 0; i < order.size(); ++i)
    for (size_t s = 0; s < k; ++s) {
      int t = dfa.step(order[i], static_cast<int>(s));
      if (seen[static_cast<size_t>(t)] < 0) {
        seen[static_cast<size_t>(t)] = static_cast<int>(order.size());
        order.push_back(t);
      }
    }
  size_t n = order.size();
  std::vector<int> cls(n);
  for (size_t i = 0; i < n; ++i) cls[i] = dfa.accepting[static_cast<size_t>(order[i])] ? 1 : 0;
  size_t num_classes = 0;
  while (true) {
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> next(n);
    for (size_t i = 0; i < n; ++i) {
      std::vector<int> sig{cls[i]};
      for (size_t s = 0; s < k; ++s)
        sig.push_back(cls[static_cast<size_t>(seen[static_cast<size_t>(dfa.step(order[i], static_cast<int>(s)))])]);
      auto it = sig_ids.emplace(std::move(sig), static_cast<int>(sig_ids.size())).first;
      next[i] = it->second;
    }
    cls = std::move(next);
    if (sig_ids.size() == num_classes) break;
    num_classes = sig_ids.size();
  }
  // renumber classes in BFS order so the start state is 0
  std::vector<int> renum(num_classes, -1);
  std::vector<size_t> rep;
  for (size_t i = 0; i < n; ++i)
    if (renum[static_cast<size_t>(cls[i])] < 0) {
      renum[static_cast<size_t>(cls[i])] = static_cast<int>(rep.size());
      rep.push_back(i);
    }
  Dfa out;
  out.alphabet = dfa.alphabet;
  out.start = 0;
  for (size_t c = 0; c < rep.size(); ++c) {
    int q = order[rep[c]];
    std::vector<int> row;
    for (size_t s = 0; s < k; ++s)
      row.push_back(renum[static_cast<size_t>(cls[static_cast<size_t>(seen[static_cast<size_t>(dfa.step(q, static_cast<int>(s)))])])]);
    out.delta.push_back(std::move(row));
    out.accepting.push_back(dfa.accepting[static_cast<size_t>(q)]);
    if (!dfa.state_names.empty()) out.state_names.push_back(dfa.state_names[static_cast<size_t>(q)]);
  }
  return out;
}

namespace {

struct TransformationHash {
  size_t operator()(const Transformation& t) const noexcept {
    size_t h = 1469598103934665603ull;
    for (int v : t) h = (h ^ static_cast<size_t>(v)) * 1099511628211ull;
    return h;
  }
};

Transformation compose(const Transformation& first, const Transformation& then) {
  Transformation r(first.size());
  for (size_t q = 0; q < first.size(); ++q) r[q] = then[static_cast<size_t>(first[q])];
  return r;
}

}  // namespace

std::vector<Transformation> transition_monoid(const Dfa& dfa, size_t limit) {
  dfa.validate();
  size_t n = dfa.delta.size();
  std::vector<Transformation> letters;
  for (size_t s = 0; s < dfa.alphabet.size(); ++s) {
    Transformation t(n);
    for (size_t q = 0; q < n; ++q) t[q] = dfa.delta[q][s];
    letters.push_back(std::move(t));
  }
  Transformation id(n);
  for (size_t q = 0; q < n; ++q) id[q] = static_cast<int>(q);
  std::unordered_set<Transformation, TransformationHash> seen{id};
  std::vector<Transformation> elems{id};
  for (size_t i = 0; i < elems.size(); ++i) {
    for (const auto& l : letters) {
      Transformation t = compose(elems[i], l);
      if (seen.insert(t).second) {
        elems.push_back(std::move(t));
        if (elems.size() > limit) throw std::runtime_error("transition monoid exceeds size limit");
      }
    }
  }
  return elems;
}

bool is_aperiodic(const Dfa& dfa) {
  Dfa m = minimize(dfa);
  size_t n = m.delta.size();
  for (const auto& t : transition_monoid(m)) {
    Transformation p = t;  // t^1
    for (size_t i = 1; i < n; ++i) p = compose(p, t);
    if (compose(p, t) != p) return false;  // t^n != t^(n+1)
  }
  return true;
}

Dfa parse_dfa_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  Dfa d;
  std::unordered_map<std::string, int> ids;
  auto state_id = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<int>(d.state_names.size()));
    if (inserted) {
      d.state_names.push_back(name);
      d.delta.emplace_back(d.alphabet.size(), -1);
      d.accepting.push_back(false);
    }
    return it->second;
  };
  bool have_alphabet = false, have_start = false;
  std::vector<std::string> accept_names;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    auto where = " (line " + std::to_string(lineno) + ")";
    if (!have_alphabet) {
      if (tok[0] == "alphabet:") tok.erase(tok.begin());
      d.alphabet = Alphabet(tok);
      have_alphabet = true;
    } else if (tok[0] == "start:") {
      if (tok.size() != 2) throw std::invalid_argument("start line needs one state" + where);
      d.start = state_id(tok[1]);
      have_start = true;
    } else if (tok[0] == "accept:") {
      accept_names.insert(accept_names.end(), tok.begin() + 1, tok.end());
    } else if (tok.size() == 4 && tok[2] == "->") {
      int from = state_id(tok[0]);
      int sym = d.alphabet.index(tok[1]);
      int to = state_id(tok[3]);
      auto& slot = d.delta[static_cast<size_t>(from)][static_cast<size_t>(sym)];
      if (slot >= 0 && slot != to) throw std::invalid_argument("nondeterministic transition" + where);
      slot = to;
    } else {
      throw std::invalid_argument("cannot parse automaton line" + where + ": " + line);
    }
  }
  if (!have_alphabet) throw std::invalid_argument("automaton file has no alphabet line");
  if (!have_start) throw std::invalid_argument("automaton file has no start line");
  for (const auto& a : accept_names) d.accepting[static_cast<size_t>(state_id(a))] = true;
  for (size_t q = 0; q < d.delta.size(); ++q)
    for (size_t s = 0; s < d.alphabet.size(); ++s)
      if (d.delta[q][s] < 0)
        throw std::invalid_argument("missing transition from " + d.state_names[q] + " on " + d.alphabet.name(static_cast<int>(s)));
  d.validate();
  return d;
}

std::string format_dfa_text(const Dfa& dfa) {
  auto name = [&](int q) {
    return dfa.state_names.empty() ? "q" + std::to_string(q) : dfa.state_names[static_cast<size_t>(q)];
  };
  std::ostringstream os;
  for (size_t s = 0; s < dfa.alphabet.size(); ++s) os << (s ? " " : "") << dfa.alphabet.name(static_cast<int>(s));
  os << "\nstart: " << name(dfa.start) << "\naccept:";
  for (int q = 0; q < dfa.num_states(); ++q)
    if (dfa.accepting[static_cast<size_t>(q)]) os << ' ' << name(q);
  os << '\n';
  for (int q = 0; q < dfa.num_states(); ++q)
    for (size_t s = 0; s < dfa.alphabet.size(); ++s)
      os << name(q) << ' ' << dfa.alphabet.name(static_cast<int>(s)) << " -> " << name(dfa.step(q, static_cast<int>(s))) << '\n';
  return os.str();
}

}  // namespace ssmc
