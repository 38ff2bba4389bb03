// Copyright 2026 The ncfvar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "ncfvar/baseline.h"
#include "ncfvar/catalog.h"
#include "ncfvar/corpus_io.h"
#include "ncfvar/error.h"
#include "ncfvar/metrics.h"
#include "ncfvar/planner.h"

namespace py = pybind11;

namespace ncfvar {
namespace {

SourceFormat Format(const std::string &name) { return ParseFormatName(name); }

EntityScope Scope(const std::string &name) {
  if (name == "global") return EntityScope::kGlobal;
  if (name == "dialog") return EntityScope::kDialog;
  throw UsageError("entity scope must be global or dialog, got " + name);
}

PlanConfig Config(const std::optional<std::string> &preset,
                  const std::optional<std::string> &config_json, std::optional<uint64_t> seed,
                  bool allow_shortfall) {
  if (preset.has_value() == config_json.has_value()) {
    throw UsageError("give exactly one of preset or config_json");
  }
  PlanConfig cfg = preset ? preset_config(*preset) : config_from_json(*config_json);
  if (seed) cfg.seed = *seed;
  cfg.allow_shortfall = cfg.allow_shortfall || allow_shortfall;
  return cfg;
}

py::dict ReportDict(const EvalReport &r) {
  py::dict d;
  d["bleu"] = r.bleu;
  d["entity_f1"] = r.entity_f1;
  d["per_response_acc"] = r.per_response_acc;
  d["per_dialog_acc"] = r.per_dialog_acc;
  d["n_responses"] = r.n_responses;
  d["n_dialogs"] = r.n_dialogs;
  d["warning"] = r.warning;
  d["text"] = report_to_text(r);
  return d;
}

PredictionSet Aligned(const std::vector<std::string> &preds, const EvalManifest &m) {
  return {preds, manifest_digest(m)};
}

}  // namespace
}  // namespace ncfvar

PYBIND11_MODULE(ncfvar, m) {
  using namespace ncfvar;
  m.doc() = "Naturalistic conversational variation for task-oriented dialog test sets";
  m.attr("__version__") = NCFVAR_VERSION;

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error &e) {
      static const char *kinds[] = {"usage", "parse", "plan", "invalid"};
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
      exc.attr("kind") = kinds[static_cast<int>(e.kind())];
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<DialogCorpus>(m, "Corpus")
      .def_property_readonly("format",
                             [](const DialogCorpus &c) { return std::string(FormatName(c.source_format)); })
      .def("__len__", [](const DialogCorpus &c) { return c.dialogs.size(); })
      .def("dialog_ids",
           [](const DialogCorpus &c) {
             std::vector<std::string> ids;
             for (const Dialog &d : c.dialogs) ids.push_back(d.id);
             return ids;
           })
      .def("serialize", [](const DialogCorpus &c) { return py::bytes(serialize(c)); })
      .def("origin_sidecar", &origin_sidecar)
      .def("checksum", &corpus_checksum)
      .def("mean_utterances", &mean_utterances)
      .def("manifest_tsv", [](const DialogCorpus &c) { return manifest_to_tsv(export_manifest(c)); })
      .def("gold_responses",
           [](const DialogCorpus &c) {
             std::vector<std::string> out;
             for (const ManifestEntry &e : export_manifest(c).entries) out.push_back(e.gold_text);
             return out;
           })
      .def("pattern_counts",
           [](const DialogCorpus &c) {
             std::map<std::string, int> out;
             for (const auto &[name, n] : corpus_stats(c).per_pattern) out[name] = n;
             return out;
           })
      .def("overlap_histogram", &overlap_histogram)
      .def("stats", [](const DialogCorpus &c) { return render_stats(corpus_stats(c)); });

  m.def(
      "parse",
      [](const std::string &format, const py::bytes &data, const std::string &origin) {
        return parse_corpus(Format(format), std::string(data), origin);
      },
      py::arg("format"), py::arg("data"), py::arg("origin") = "",
      "Parses a bAbI (format='babi') or SMD (format='smd') test file.");

  m.def(
      "inject",
      [](const DialogCorpus &c, std::optional<std::string> preset,
         std::optional<std::string> config_json, std::optional<uint64_t> seed, int jobs,
         bool allow_shortfall) {
        PlanConfig cfg = Config(preset, config_json, seed, allow_shortfall);
        InjectionPlan p;
        {
          py::gil_scoped_release release;
          p = plan(c, cfg);
        }
        DialogCorpus updated = execute(c, p, cfg.seed, jobs);
        return py::make_tuple(updated, plan_dump(p));
      },
      py::arg("corpus"), py::arg("preset") = py::none(), py::arg("config_json") = py::none(),
      py::arg("seed") = py::none(), py::arg("jobs") = 1, py::arg("allow_shortfall") = false,
      "Plans and applies injections. Returns (updated corpus, plan TSV).");

  m.def(
      "ablate",
      [](const DialogCorpus &c, const std::string &pattern, std::optional<std::string> preset,
         std::optional<std::string> config_json) {
        return ablate(c, Config(preset, config_json, std::nullopt, false), pattern);
      },
      py::arg("corpus"), py::arg("pattern"), py::arg("preset") = py::none(),
      py::arg("config_json") = py::none());

  m.def(
      "review",
      [](const DialogCorpus &c, double fraction, uint64_t seed) {
        return render_review(c, sample_review(c, fraction, seed));
      },
      py::arg("corpus"), py::arg("fraction") = 0.2, py::arg("seed") = 0);

  m.def("corpus_bleu",
        py::overload_cast<const std::vector<std::string> &, const std::vector<std::string> &>(
            &corpus_bleu),
        py::arg("hypotheses"), py::arg("references"));

  m.def(
      "evaluate",
      [](const std::vector<std::string> &predictions, const DialogCorpus &c,
         const std::string &scope) {
        EvalManifest man = export_manifest(c);
        return ReportDict(evaluate(Aligned(predictions, man), man, c, Scope(scope)));
      },
      py::arg("predictions"), py::arg("corpus"), py::arg("entity_scope") = "global",
      "Scores predictions aligned to the corpus's original agent responses.");

  m.def(
      "compare",
      [](const std::string &original_report, const std::string &updated_report) {
        auto rows = compare(report_from_text(original_report), report_from_text(updated_report));
        py::list out;
        for (const ComparisonRow &r : rows) {
          py::dict d;
          d["metric"] = r.metric;
          d["original"] = r.original;
          d["updated"] = r.updated;
          d["delta"] = r.delta;
          d["relative"] = r.relative;
          out.append(d);
        }
        return out;
      },
      py::arg("original_report"), py::arg("updated_report"));

  m.def(
      "baseline",
      [](const DialogCorpus &c, std::optional<std::vector<std::string>> candidates, int jobs) {
        CandidateSet set = candidates ? CandidateSet(*candidates) : CandidateSet::FromCorpus(c);
        py::gil_scoped_release release;
        return predict(c, export_manifest(c), set, jobs).responses;
      },
      py::arg("corpus"), py::arg("candidates") = py::none(), py::arg("jobs") = 1,
      "TF-IDF retrieval predictions for every original agent response.");

  m.def("patterns", [] {
    py::list out;
    for (const PatternCatalogEntry &e : list_patterns()) {
      py::dict d;
      d["code"] = e.ncf_code;
      d["class"] = std::string(ClassName(e.id.cls));
      d["name"] = e.id.name;
      d["description"] = e.description;
      d["has_recipe"] = e.has_recipe;
      out.append(d);
    }
    return out;
  });
  m.def("presets", &preset_names);
}
