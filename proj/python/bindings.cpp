#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ssmc/compiler.hpp"
#include "ssmc/serialize.hpp"
#include "ssmc/simulate.hpp"
#include "ssmc/verify.hpp"

namespace py = pybind11;
using namespace ssmc;

namespace {

LanguagePtr language(const std::string& id, int K, int h, const std::string& mode) {
  if (mode != "dense" && mode != "sparse") throw std::invalid_argument("mode must be dense or sparse");
  LanguageParams params{K, h, mode == "sparse" ? FlipFlopMix::sparse() : FlipFlopMix::dense()};
  return make_language(id, params);
}

Word word_of(const SsmModel& m, const py::object& w) {
  if (py::isinstance<py::str>(w)) return m.alphabet.parse_word(w.cast<std::string>());
  Word out;
  for (auto s : w) out.push_back(m.alphabet.index(s.cast<std::string>()));
  return out;
}

py::dict report_dict(const VerificationReport& r) {
  py::list mism;
  for (const auto& x : r.mismatches)
    mism.append(py::dict(py::arg("word") = x.word, py::arg("position") = x.position,
                         py::arg("expected") = x.expected, py::arg("got") = x.got));
  return py::dict(py::arg("spec") = r.spec, py::arg("strategy") = r.strategy.describe(),
                  py::arg("checked") = r.checked, py::arg("mismatches") = r.mismatch_count,
                  py::arg("first_mismatches") = mism, py::arg("pass") = r.pass);
}

}  // namespace

PYBIND11_MODULE(pyssmc, mod) {
  mod.doc() = "Exact fixed-point SSM compiler for formal languages";
  py::register_exception<RefusalError>(mod, "RefusalError");

  py::class_<SsmModel>(mod, "Model")
      .def_property_readonly("language", [](const SsmModel& m) { return m.language; })
      .def_property_readonly("alphabet", [](const SsmModel& m) { return m.alphabet.symbols(); })
      .def_property_readonly("precision", [](const SsmModel& m) { return m.precision; })
      .def_property_readonly("num_layers", [](const SsmModel& m) { return m.layers.size(); })
      .def_property_readonly("width", [](const SsmModel& m) { return model_width(m); })
      .def_property_readonly("nonnegative", [](const SsmModel& m) { return m.flags.nonnegative; })
      .def_property_readonly("predictive",
                             [](const SsmModel& m) { return m.readout.kind == Readout::Predictive; })
      .def("run",
           [](const SsmModel& m, const py::object& w) {
             std::vector<std::string> out;
             for (const auto& l : run_model(m, word_of(m, w))) out.push_back(label_to_string(l, m.alphabet));
             return out;
           },
           py::arg("word"), "Predictive label after every prefix, as bit strings.")
      .def("recognize", [](const SsmModel& m, const py::object& w) { return recognize(m, word_of(m, w)); },
           py::arg("word"))
      .def("dumps", [](const SsmModel& m) { return dump_model(m); })
      .def("save", [](const SsmModel& m, const std::string& path) { save_model(m, path); }, py::arg("path"))
      .def("__repr__", [](const SsmModel& m) {
        return "<pyssmc.Model " + m.language + " layers=" + std::to_string(m.layers.size()) +
               " width=" + std::to_string(model_width(m)) + ">";
      });

  mod.def("catalog", &catalog_ids);

  mod.def(
      "classify",
      [](const std::string& id) {
        auto lang = make_language(id);
        if (!lang->dfa()) throw std::invalid_argument(id + " is not a regular language");
        Dfa m = minimize(*lang->dfa());
        return py::dict(py::arg("star_free") = is_aperiodic(m), py::arg("states") = m.delta.size(),
                        py::arg("monoid") = transition_monoid(m).size());
      },
      py::arg("lang"));

  mod.def(
      "compile",
      [](const std::string& id, const std::string& gates, int precision, int K, int h) {
        return compile_language(*language(id, K, h, "dense"), parse_gate_mode(gates), precision);
      },
      py::arg("lang"), py::arg("gates") = "nonnegative", py::arg("precision") = 8, py::arg("K") = 2,
      py::arg("h") = 2);

  mod.def("loads", &parse_model, py::arg("text"));
  mod.def("load", &load_model, py::arg("path"));

  mod.def(
      "verify",
      [](const SsmModel& m, std::optional<int> exhaustive, int count, int min_len, int max_len, uint64_t seed,
         std::optional<std::string> lang, const std::string& mode) {
        auto l = language(lang.value_or(m.language), 2, 2, mode);
        Strategy s = exhaustive ? Strategy::exhaustive(*exhaustive) : Strategy::random(count, min_len, max_len, seed);
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = check_equivalence(m, *l, s);
        }
        return report_dict(r);
      },
      py::arg("model"), py::arg("exhaustive") = py::none(), py::arg("count") = 1000, py::arg("min_len") = 1,
      py::arg("max_len") = 50, py::arg("seed") = 0, py::arg("lang") = py::none(), py::arg("mode") = "dense");

  mod.def(
      "generate",
      [](const std::string& id, int count, int min_len, int max_len, uint64_t seed, int K, int h,
         const std::string& mode) {
        auto l = language(id, K, h, mode);
        std::vector<std::pair<std::string, std::vector<std::string>>> out;
        for (const auto& s : generate_samples(*l, count, min_len, max_len, seed)) {
          std::vector<std::string> labels;
          for (const auto& x : s.labels) labels.push_back(label_to_string(x, l->alphabet()));
          out.emplace_back(l->alphabet().format(s.word), std::move(labels));
        }
        return out;
      },
      py::arg("lang"), py::arg("count") = 10, py::arg("min_len") = 1, py::arg("max_len") = 50, py::arg("seed") = 0,
      py::arg("K") = 2, py::arg("h") = 2, py::arg("mode") = "dense");

  mod.def(
      "stationarity_step",
      [](const SsmModel& m, size_t N) { return parity_convergence_demo(m, N).stationarity_step; },
      py::arg("model"), py::arg("N") = 10000);

  mod.def("random_nonneg_model", [](uint64_t seed) { return random_nonneg_sample(seed); }, py::arg("seed"));
}
