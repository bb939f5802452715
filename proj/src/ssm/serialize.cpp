#include "ssmc/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssmc {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "ssmc-model";
constexpr int kVersion = 1;

json vec_json(const FixedVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.to_string());
  return a;
}

FixedVector vec_from(const json& a, int p) {
  FixedVector v;
  for (const auto& x : a) v.push_back(FixedPoint::parse(x.get<std::string>(), p));
  return v;
}

json mixed_json(const FixedVector& real, const std::vector<UnitRotation>& polar) {
  json a = vec_json(real);
  for (const auto& r : polar) a.push_back(json{{"rot", r.to_string()}});
  return a;
}

void mixed_from(const json& a, int p, FixedVector& real, std::vector<UnitRotation>& polar) {
  real.clear();
  polar.clear();
  for (const auto& x : a) {
    if (x.is_string()) {
      if (!polar.empty()) throw std::invalid_argument("real entries must precede rotation entries");
      real.push_back(FixedPoint::parse(x.get<std::string>(), p));
    } else {
      polar.push_back(UnitRotation::parse(x.at("rot").get<std::string>()));
    }
  }
}

json decoder_json(const Decoder& d) {
  json atoms = json::array();
  for (const auto& a : d.atoms) {
    if (a.kind == Atom::PhaseIs) atoms.push_back({{"kind", "phase"}, {"coord", a.coord}, {"rot", a.phase.to_string()}});
    else
      atoms.push_back({{"kind", a.kind == Atom::Greater ? ">" : ">="}, {"coord", a.coord}, {"threshold", a.threshold.to_string()}});
  }
  json rules = json::array();
  for (const auto& r : d.rules) {
    json when = json::array();
    for (const auto& l : r.when) when.push_back(json::array({l.atom, l.positive}));
    rules.push_back({{"when", when}, {"tag", r.tag}});
  }
  json j{{"numTags", d.num_tags}, {"default", d.default_tag}, {"atoms", atoms}, {"rules", rules}};
  if (!d.tag_names.empty()) j["tagNames"] = d.tag_names;
  return j;
}

Decoder decoder_from(const json& j, int p) {
  Decoder d;
  d.num_tags = j.at("numTags").get<int>();
  d.default_tag = j.at("default").get<int>();
  for (const auto& a : j.at("atoms")) {
    Atom at;
    std::string kind = a.at("kind").get<std::string>();
    at.coord = a.at("coord").get<int>();
    if (kind == "phase") {
      at.kind = Atom::PhaseIs;
      at.phase = UnitRotation::parse(a.at("rot").get<std::string>());
    } else if (kind == ">" || kind == ">=") {
      at.kind = kind == ">" ? Atom::Greater : Atom::GreaterEq;
      at.threshold = FixedPoint::parse(a.at("threshold").get<std::string>(), p);
    } else {
      throw std::invalid_argument("unknown atom kind '" + kind + "'");
    }
    d.atoms.push_back(at);
  }
  for (const auto& r : j.at("rules")) {
    Rule rule;
    rule.tag = r.at("tag").get<int>();
    for (const auto& l : r.at("when")) rule.when.push_back({l.at(0).get<int>(), l.at(1).get<bool>()});
    d.rules.push_back(std::move(rule));
  }
  if (j.contains("tagNames")) d.tag_names = j.at("tagNames").get<std::vector<std::string>>();
  return d;
}

const char* mix_kind_name(MixSpec::Kind k) {
  switch (k) {
    case MixSpec::Identity: return "identity";
    case MixSpec::Affine: return "affine";
    case MixSpec::Glu: return "glu";
    case MixSpec::SwiGlu: return "swiglu";
  }
  return "identity";
}

json affine_json(const AffineMap& a) {
  json entries = json::array();
  for (const auto& e : a.entries) entries.push_back(json::array({e.row, e.col, e.weight.to_string()}));
  json j{{"out", a.out_dim}, {"entries", entries}};
  if (!a.bias.empty()) j["bias"] = vec_json(a.bias);
  return j;
}

AffineMap affine_from(const json& j, int p) {
  AffineMap a;
  a.out_dim = j.at("out").get<int>();
  for (const auto& e : j.at("entries"))
    a.entries.push_back({e.at(0).get<int>(), e.at(1).get<int>(), FixedPoint::parse(e.at(2).get<std::string>(), p)});
  if (j.contains("bias")) a.bias = vec_from(j.at("bias"), p);
  return a;
}

json mix_json(const MixSpec& m) {
  json j{{"kind", mix_kind_name(m.kind)}, {"concat", m.concat_input}};
  if (m.kind != MixSpec::Identity) j["value"] = affine_json(m.value);
  if (m.kind == MixSpec::Glu || m.kind == MixSpec::SwiGlu) j["gate"] = affine_json(m.gate);
  return j;
}

MixSpec mix_from(const json& j, int p) {
  MixSpec m;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") m.kind = MixSpec::Identity;
  else if (kind == "affine") m.kind = MixSpec::Affine;
  else if (kind == "glu") m.kind = MixSpec::Glu;
  else if (kind == "swiglu") m.kind = MixSpec::SwiGlu;
  else throw std::invalid_argument("unknown mix kind '" + kind + "'");
  m.concat_input = j.at("concat").get<bool>();
  if (m.kind != MixSpec::Identity) m.value = affine_from(j.at("value"), p);
  if (m.kind == MixSpec::Glu || m.kind == MixSpec::SwiGlu) m.gate = affine_from(j.at("gate"), p);
  return m;
}

}  // namespace

json model_to_json(const SsmModel& m) {
  json layers = json::array();
  for (const auto& L : m.layers) {
    json gates = json::array(), incs = json::array();
    for (size_t t = 0; t < L.gate.size(); ++t) {
      gates.push_back(mixed_json(L.gate[t], L.gate_polar[t]));
      incs.push_back(vec_json(L.inc[t]));
    }
    json groups = json::array();
    for (const auto& [s, n] : L.norm_groups) groups.push_back(json::array({s, n}));
    layers.push_back({{"d", L.width + L.polar_width},
                      {"realWidth", L.width},
                      {"inputDim", L.input_dim},
                      {"inputPolar", L.input_polar},
                      {"decoder", decoder_json(L.decoder)},
                      {"gateTable", gates},
                      {"incTable", incs},
                      {"h0", mixed_json(L.h0, L.h0_polar)},
                      {"mix2", mix_json(L.mix2)},
                      {"normalize", L.normalize},
                      {"normGroups", groups},
                      {"mix1", mix_json(L.mix1)}});
  }
  json emb = json::array();
  for (const auto& e : m.embedding) emb.push_back(vec_json(e));
  json readout{{"kind", m.readout.kind == Readout::Predictive ? "predictive" : "accept"},
               {"decoder", decoder_json(m.readout.decoder)}};
  if (m.readout.kind == Readout::Predictive) {
    json labels = json::array();
    for (const auto& l : m.readout.labels) labels.push_back(label_to_string(l, m.alphabet));
    readout["labels"] = labels;
  } else {
    json acc = json::array();
    for (bool b : m.readout.accept) acc.push_back(b);
    readout["accept"] = acc;
  }
  return {{"format", kFormat},
          {"version", kVersion},
          {"precision", m.precision},
          {"flags", {{"nonnegative", m.flags.nonnegative}, {"time_invariant", m.flags.time_invariant}}},
          {"language", m.language},
          {"alphabet", m.alphabet.symbols()},
          {"embedding", emb},
          {"layers", layers},
          {"readout", readout}};
}

SsmModel model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) throw std::invalid_argument("not a model file");
    if (j.at("version").get<int>() != kVersion) throw std::invalid_argument("unsupported model version");
    SsmModel m;
    m.precision = j.at("precision").get<int>();
    check_precision(m.precision);
    int p = m.precision;
    m.flags.nonnegative = j.at("flags").at("nonnegative").get<bool>();
    m.flags.time_invariant = j.at("flags").at("time_invariant").get<bool>();
    m.language = j.value("language", "");
    m.alphabet = Alphabet(j.at("alphabet").get<std::vector<std::string>>());
    for (const auto& e : j.at("embedding")) m.embedding.push_back(vec_from(e, p));
    for (const auto& lj : j.at("layers")) {
      SsmLayer L;
      int d = lj.at("d").get<int>();
      L.width = lj.at("realWidth").get<int>();
      L.polar_width = d - L.width;
      L.input_dim = lj.at("inputDim").get<int>();
      L.input_polar = lj.at("inputPolar").get<int>();
      L.decoder = decoder_from(lj.at("decoder"), p);
      for (const auto& g : lj.at("gateTable")) {
        FixedVector r;
        std::vector<UnitRotation> q;
        mixed_from(g, p, r, q);
        L.gate.push_back(std::move(r));
        L.gate_polar.push_back(std::move(q));
      }
      for (const auto& b : lj.at("incTable")) L.inc.push_back(vec_from(b, p));
      mixed_from(lj.at("h0"), p, L.h0, L.h0_polar);
      L.mix2 = mix_from(lj.at("mix2"), p);
      L.normalize = lj.at("normalize").get<bool>();
      for (const auto& g : lj.at("normGroups")) L.norm_groups.push_back({g.at(0).get<int>(), g.at(1).get<int>()});
      L.mix1 = mix_from(lj.at("mix1"), p);
      m.layers.push_back(std::move(L));
    }
    const auto& rj = j.at("readout");
    std::string kind = rj.at("kind").get<std::string>();
    m.readout.decoder = decoder_from(rj.at("decoder"), p);
    if (kind == "predictive") {
      m.readout.kind = Readout::Predictive;
      for (const auto& l : rj.at("labels")) m.readout.labels.push_back(label_from_string(l.get<std::string>(), m.alphabet));
    } else if (kind == "accept") {
      m.readout.kind = Readout::Accept;
      for (const auto& a : rj.at("accept")) m.readout.accept.push_back(a.get<bool>());
    } else {
      throw std::invalid_argument("unknown readout kind '" + kind + "'");
    }
    validate_model(m);
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed model file: ") + e.what());
  }
}

std::string dump_model(const SsmModel& m) { return model_to_json(m).dump(1); }

SsmModel parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed model file: ") + e.what());
  }
  return model_from_json(j);
}

void save_model(const SsmModel& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << dump_model(m) << '\n';
  if (!os) throw std::runtime_error("error writing " + path);
}

SsmModel load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_model(ss.str());
}

}  // namespace ssmc
