#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>

#include "ssmc/compiler.hpp"

namespace ssmc {

int SetResetAutomaton::code_bits() const {
  int b = 0;
  while ((1 << b) < num_states) ++b;
  return std::max(b, 1);
}

void SetResetAutomaton::validate() const {
  if (num_states < 2) throw std::invalid_argument("set-reset automaton needs at least two states");
  if (reset_to.empty()) throw std::invalid_argument("set-reset automaton needs at least one symbol");
  std::vector<bool> hit(static_cast<size_t>(num_states), false);
  for (int t : reset_to) {
    if (t == -1) continue;
    if (t < 1 || t >= num_states) throw std::invalid_argument("reset target out of range");
    hit[static_cast<size_t>(t)] = true;
  }
  for (int q = 1; q < num_states; ++q)
    if (!hit[static_cast<size_t>(q)]) throw std::invalid_argument("state " + std::to_string(q) + " has no reset symbol");
  if (!state_names.empty() && state_names.size() != static_cast<size_t>(num_states))
    throw std::invalid_argument("state name list has wrong size");
}

std::vector<int> CascadeProgram::step(const std::vector<int>& joint, int symbol) const {
  std::vector<int> key;
  std::vector<int> next(joint.size());
  for (size_t i = 0; i < components.size(); ++i) {
    key.assign(joint.begin(), joint.begin() + static_cast<long>(i));
    key.push_back(symbol);
    auto it = wiring[i].find(key);
    if (it == wiring[i].end()) throw std::logic_error("cascade wiring has no entry for an unreachable state");
    next[i] = components[i].step(joint[i], it->second);
  }
  return next;
}

std::vector<int> CascadeProgram::run(const Word& w) const {
  auto j = initial();
  for (int s : w) j = step(j, s);
  return j;
}

std::vector<std::vector<int>> CascadeProgram::reachable() const {
  std::set<std::vector<int>> seen{initial()};
  std::vector<std::vector<int>> order{initial()};
  for (size_t i = 0; i < order.size(); ++i)
    for (size_t s = 0; s < dfa.alphabet.size(); ++s) {
      auto n = step(order[i], static_cast<int>(s));
      if (seen.insert(n).second) order.push_back(n);
    }
  return order;
}

namespace {

using Mask = uint64_t;

Transformation compose(const Transformation& first, const Transformation& then) {
  Transformation r(first.size());
  for (size_t q = 0; q < first.size(); ++q) r[q] = then[static_cast<size_t>(first[q])];
  return r;
}

Mask apply_to(Mask m, const Transformation& t) {
  Mask r = 0;
  for (size_t q = 0; q < t.size(); ++q)
    if (m >> q & 1) r |= Mask{1} << t[q];
  return r;
}

bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

class Holonomy {
 public:
  explicit Holonomy(const Dfa& dfa) : dfa_(dfa), n_(static_cast<size_t>(dfa.num_states())) {
    if (n_ > 64) throw RefusalError("automaton has more than 64 states; decomposition not supported");
    for (size_t s = 0; s < dfa.alphabet.size(); ++s) {
      Transformation t(n_);
      for (size_t q = 0; q < n_; ++q) t[q] = dfa.delta[q][s];
      letters_.push_back(std::move(t));
    }
    id_.resize(n_);
    for (size_t q = 0; q < n_; ++q) id_[q] = static_cast<int>(q);
    full_ = n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1;
    build_images();
    build_classes();
    build_heights();
    build_translations();
    build_tiles();
    build_levels();
  }

  int height() const { return height_of(full_); }
  size_t level_size(int k) const { return level_pairs_[static_cast<size_t>(k)].size(); }

  // Per-level coordinate: index into level_pairs_[k], or -1 when unset.
  using Coords = std::vector<int>;

  Coords encode(int q) const {
    Coords c(static_cast<size_t>(height()) + 1, -1);
    Mask P = full_;
    int f = q;
    while (std::popcount(P) > 1) {
      const auto& tl = tiles_.at(P);
      Mask T = 0;
      for (Mask t : tl)
        if (t >> f & 1) {
          T = t;
          break;
        }
      c[static_cast<size_t>(height_of(P))] = pair_index(P, T);
      f = s_.at(T)[static_cast<size_t>(f)];
      P = rep_of(T);
    }
    return c;
  }

  int decode(const Coords& c) const {
    Mask P = full_;
    Transformation b = id_;
    while (std::popcount(P) > 1) {
      int idx = c[static_cast<size_t>(height_of(P))];
      if (idx < 0) throw std::logic_error("holonomy decode reached an unset coordinate");
      auto [R, T] = level_pairs_[static_cast<size_t>(height_of(P))][static_cast<size_t>(idx)];
      if (R != P) throw std::logic_error("holonomy coordinate does not match its frame");
      b = compose(sbar_.at(T), b);
      P = rep_of(T);
    }
    return b[static_cast<size_t>(std::countr_zero(P))];
  }

  // Returns per-level action: -1 keep, otherwise the new pair index.
  std::vector<int> step(const Coords& old, int letter) const {
    std::vector<int> action(old.size(), -1);
    Mask Pold = full_, Pnew = full_;
    Transformation u = letters_[static_cast<size_t>(letter)];
    while (std::popcount(Pnew) > 1) {
      while (height_of(Pold) > height_of(Pnew)) {
        auto [R, T] = old_pair(old, Pold);
        u = compose(sbar_.at(T), u);
        Pold = rep_of(T);
        (void)R;
      }
      int k = height_of(Pnew);
      Mask img = apply_to(Pold, u);
      if (height_of(Pold) == k && img == Pnew) {
        if (Pold != Pnew) throw std::logic_error("holonomy frames of equal height differ");
        auto [R, T] = old_pair(old, Pold);
        for (size_t q = 0; q < n_; ++q)
          if ((Pold >> q & 1) && u[q] != static_cast<int>(q))
            throw RefusalError("automaton has a nontrivial permutation group; not star-free");
        u = compose(compose(sbar_.at(T), u), s_.at(T));
        Pold = Pnew = rep_of(T);
        (void)R;
      } else {
        const auto& tl = tiles_.at(Pnew);
        Mask T = 0;
        for (Mask t : tl)
          if (subset(img, t)) {
            T = t;
            break;
          }
        if (T == 0) throw std::logic_error("no tile contains the image");
        action[static_cast<size_t>(k)] = pair_index(Pnew, T);
        u = compose(u, s_.at(T));
        Pnew = rep_of(T);
      }
    }
    return action;
  }

 private:
  std::pair<Mask, Mask> old_pair(const Coords& old, Mask P) const {
    int k = height_of(P);
    int idx = old[static_cast<size_t>(k)];
    if (idx < 0) throw std::logic_error("holonomy step reached an unset coordinate");
    auto pr = level_pairs_[static_cast<size_t>(k)][static_cast<size_t>(idx)];
    if (pr.first != P) throw std::logic_error("holonomy coordinate does not match its frame");
    return pr;
  }

  int pair_index(Mask R, Mask T) const {
    const auto& v = level_pairs_[static_cast<size_t>(height_of(R))];
    auto it = std::find(v.begin(), v.end(), std::make_pair(R, T));
    if (it == v.end()) throw std::logic_error("unknown holonomy pair");
    return static_cast<int>(it - v.begin());
  }

  int height_of(Mask A) const {
    if (std::popcount(A) <= 1) return 0;
    return class_height_[static_cast<size_t>(class_of_.at(A))];
  }

  Mask rep_of(Mask A) const {
    if (std::popcount(A) <= 1) return A;
    return class_rep_[static_cast<size_t>(class_of_.at(A))];
  }

  void build_images() {
    std::set<Mask> seen{full_};
    images_.push_back(full_);
    for (size_t i = 0; i < images_.size(); ++i)
      for (const auto& t : letters_) {
        Mask m = apply_to(images_[i], t);
        if (seen.insert(m).second) images_.push_back(m);
      }
    for (size_t q = 0; q < n_; ++q)
      if (seen.insert(Mask{1} << q).second) images_.push_back(Mask{1} << q);
    for (size_t i = 0; i < images_.size(); ++i) index_[images_[i]] = i;
  }

  std::vector<bool> reach_from(Mask A) const {
    std::vector<bool> r(images_.size(), false);
    std::deque<Mask> work{A};
    r[index_.at(A)] = true;
    while (!work.empty()) {
      Mask m = work.front();
      work.pop_front();
      for (const auto& t : letters_) {
        Mask n = apply_to(m, t);
        size_t j = index_.at(n);
        if (!r[j]) {
          r[j] = true;
          work.push_back(n);
        }
      }
    }
    return r;
  }

  void build_classes() {
    size_t m = images_.size();
    for (size_t i = 0; i < m; ++i) reach_.push_back(reach_from(images_[i]));
    for (size_t i = 0; i < m; ++i) {
      Mask A = images_[i];
      if (std::popcount(A) <= 1 || class_of_.count(A)) continue;
      int c = static_cast<int>(class_members_.size());
      std::vector<Mask> members;
      for (size_t j = 0; j < m; ++j)
        if (reach_[i][j] && reach_[j][i] && std::popcount(images_[j]) > 1) {
          members.push_back(images_[j]);
          class_of_[images_[j]] = c;
        }
      std::sort(members.begin(), members.end());
      Mask rep = std::find(members.begin(), members.end(), full_) != members.end() ? full_ : members.front();
      class_members_.push_back(members);
      class_rep_.push_back(rep);
    }
  }

  void build_heights() {
    size_t nc = class_members_.size();
    class_height_.assign(nc, -1);
    std::function<int(size_t)> h = [&](size_t c) -> int {
      if (class_height_[c] >= 0) return class_height_[c];
      Mask R = class_rep_[c];
      const auto& orbit = reach_[index_.at(R)];
      int best = 0;
      for (size_t d = 0; d < nc; ++d) {
        if (d == c) continue;
        bool below = false;
        for (Mask A : class_members_[d]) {
          for (size_t j = 0; j < images_.size() && !below; ++j)
            if (orbit[j] && subset(A, images_[j])) below = true;
          if (below) break;
        }
        if (below) best = std::max(best, h(d));
      }
      return class_height_[c] = best + 1;
    };
    for (size_t c = 0; c < nc; ++c) h(c);
  }

  // Transformation realising a path A -> B in the image graph.
  Transformation path(Mask A, Mask B) const {
    std::map<Mask, Transformation> seen{{A, id_}};
    std::deque<Mask> work{A};
    while (!work.empty()) {
      Mask m = work.front();
      work.pop_front();
      if (m == B) return seen.at(m);
      for (const auto& t : letters_) {
        Mask n = apply_to(m, t);
        if (!seen.count(n)) {
          seen[n] = compose(seen.at(m), t);
          work.push_back(n);
        }
      }
    }
    throw std::logic_error("no translation path between equivalent images");
  }

  void build_translations() {
    for (size_t c = 0; c < class_members_.size(); ++c) {
      Mask R = class_rep_[c];
      for (Mask A : class_members_[c]) {
        s_[A] = A == R ? id_ : path(A, R);
        sbar_[A] = A == R ? id_ : path(R, A);
      }
    }
    for (size_t q = 0; q < n_; ++q) {
      s_[Mask{1} << q] = id_;
      sbar_[Mask{1} << q] = id_;
    }
  }

  void build_tiles() {
    for (Mask A : images_) {
      if (std::popcount(A) <= 1) continue;
      std::vector<Mask> inside;
      for (Mask B : images_)
        if (B != A && subset(B, A)) inside.push_back(B);
      std::vector<Mask> tl;
      for (Mask B : inside) {
        bool maximal = true;
        for (Mask C : inside)
          if (C != B && subset(B, C)) maximal = false;
        if (maximal) tl.push_back(B);
      }
      std::sort(tl.begin(), tl.end());
      tiles_[A] = tl;
    }
  }

  void build_levels() {
    level_pairs_.assign(static_cast<size_t>(height()) + 1, {});
    std::vector<Mask> reps(class_rep_.begin(), class_rep_.end());
    std::sort(reps.begin(), reps.end());
    for (Mask R : reps)
      for (Mask T : tiles_.at(R)) level_pairs_[static_cast<size_t>(height_of(R))].push_back({R, T});
  }

  const Dfa& dfa_;
  size_t n_;
  Mask full_ = 0;
  std::vector<Transformation> letters_;
  Transformation id_;
  std::vector<Mask> images_;
  std::map<Mask, size_t> index_;
  std::vector<std::vector<bool>> reach_;
  std::map<Mask, int> class_of_;
  std::vector<std::vector<Mask>> class_members_;
  std::vector<Mask> class_rep_;
  std::vector<int> class_height_;
  std::map<Mask, Transformation> s_, sbar_;
  std::map<Mask, std::vector<Mask>> tiles_;
  std::vector<std::vector<std::pair<Mask, Mask>>> level_pairs_;
};

}  // namespace

CascadeProgram holonomy_decompose(const Dfa& input) {
  Dfa dfa = minimize(input);
  if (!is_aperiodic(dfa)) throw RefusalError("language is not star-free (transition monoid is not aperiodic)");
  CascadeProgram prog;
  prog.dfa = dfa;
  if (dfa.num_states() == 1) {
    // one state: a single component that never moves
    SetResetAutomaton a;
    a.num_states = 2;
    a.reset_to = {1, -1};
    prog.components.push_back(a);
    prog.wiring.resize(1);
    for (size_t s = 0; s < dfa.alphabet.size(); ++s) prog.wiring[0][{static_cast<int>(s)}] = 1;
    prog.output[{0}] = 0;
    prog.output[{1}] = 0;
    return prog;
  }
  Holonomy H(dfa);
  int height = H.height();
  // component i handles level height - i; state 0 is the start value, j + 1 the j-th pair
  auto init = H.encode(dfa.start);
  size_t n = static_cast<size_t>(height);
  for (size_t i = 0; i < n; ++i) {
    int k = height - static_cast<int>(i);
    SetResetAutomaton a;
    int m = static_cast<int>(H.level_size(k));
    a.num_states = m + 1;
    for (int j = 0; j < m; ++j) a.reset_to.push_back(j + 1);
    a.reset_to.push_back(-1);
    prog.components.push_back(a);
  }
  prog.wiring.resize(n);
  auto coords_of = [&](const std::vector<int>& joint) {
    Holonomy::Coords c(static_cast<size_t>(height) + 1, -1);
    for (size_t i = 0; i < n; ++i) {
      size_t k = static_cast<size_t>(height) - i;
      c[k] = joint[i] == 0 ? init[k] : joint[i] - 1;
    }
    return c;
  };
  std::vector<int> start(n, 0);
  std::set<std::vector<int>> seen{start};
  std::vector<std::vector<int>> order{start};
  prog.output[start] = dfa.start;
  if (H.decode(coords_of(start)) != dfa.start) throw std::logic_error("holonomy encoding of the start state is wrong");
  for (size_t idx = 0; idx < order.size(); ++idx) {
    auto joint = order[idx];
    auto coords = coords_of(joint);
    int q = prog.output.at(joint);
    for (size_t s = 0; s < dfa.alphabet.size(); ++s) {
      auto act = H.step(coords, static_cast<int>(s));
      std::vector<int> next(n);
      for (size_t i = 0; i < n; ++i) {
        int a = act[static_cast<size_t>(height) - i];
        int sym = a < 0 ? prog.components[i].num_symbols() - 1 : a;
        std::vector<int> key(joint.begin(), joint.begin() + static_cast<long>(i));
        key.push_back(static_cast<int>(s));
        auto [it, inserted] = prog.wiring[i].emplace(key, sym);
        if (!inserted && it->second != sym) throw std::logic_error("holonomy action depends on lower levels");
        next[i] = prog.components[i].step(joint[i], sym);
      }
      int qn = dfa.step(q, static_cast<int>(s));
      if (H.decode(coords_of(next)) != qn) throw std::logic_error("holonomy cascade disagrees with the automaton");
      auto [it, inserted] = prog.output.emplace(next, qn);
      if (!inserted && it->second != qn) throw std::logic_error("holonomy output map is not a function");
      if (seen.insert(next).second) order.push_back(next);
    }
  }
  return prog;
}

nlohmann::json cascade_to_json(const CascadeProgram& c) {
  nlohmann::json comps = nlohmann::json::array();
  for (size_t i = 0; i < c.components.size(); ++i) {
    const auto& a = c.components[i];
    nlohmann::json wiring = nlohmann::json::array();
    for (const auto& [k, v] : c.wiring[i]) wiring.push_back({{"key", k}, {"symbol", v}});
    comps.push_back({{"states", a.num_states}, {"resetTo", a.reset_to}, {"wiring", wiring}});
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [k, v] : c.output) out.push_back({{"joint", k}, {"state", v}});
  return {{"alphabet", c.dfa.alphabet.symbols()}, {"components", comps}, {"output", out}};
}

}  // namespace ssmc
