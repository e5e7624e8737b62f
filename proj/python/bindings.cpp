#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ringdisp/engine.hpp"
#include "ringdisp/errors.hpp"
#include "ringdisp/scenario.hpp"
#include "ringdisp/sweep.hpp"
#include "ringdisp/trace_io.hpp"
#include "ringdisp/verify.hpp"

namespace py = pybind11;
using namespace ringdisp;

namespace {

Ruleset ruleset(const std::string& name) {
  const auto r = rulesetFromString(name);
  if (!r) throw py::value_error("ruleset must be 'literal' or 'repaired'");
  return *r;
}

py::dict violationDict(const Violation& v) {
  py::dict d;
  d["kind"] = std::string(toString(v.kind));
  d["code"] = std::string(1, lemmaCode(v.kind));
  d["phase"] = v.phase;
  d["round"] = v.roundInPhase;
  std::vector<std::uint64_t> labels;
  for (const Label& l : v.robots) labels.push_back(l.value);
  d["robots"] = labels;
  d["nodes"] = v.nodes;
  d["detail"] = v.detail;
  return d;
}

py::list violationList(const std::vector<Violation>& vs) {
  py::list out;
  for (const Violation& v : vs) out.append(violationDict(v));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Silent-robot ring dispersion simulator";

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<TraceError>(m, "TraceError", PyExc_ValueError);
  py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](std::uint32_t n, std::uint64_t maxLabel, const std::vector<std::pair<std::uint64_t, NodeIndex>>& robots) {
             Scenario s{n, maxLabel, {}};
             for (auto [label, node] : robots) s.robots.push_back(RobotSpec{Label{label}, node});
             validateScenario(s);
             return s;
           }),
           py::arg("n"), py::arg("maxlabel"), py::arg("robots"))
      .def_readonly("n", &Scenario::n)
      .def_readonly("maxlabel", &Scenario::maxLabel)
      .def_property_readonly("k", &Scenario::k)
      .def_property_readonly("max_size", [](const Scenario& s) { return s.maxSize().bits; })
      .def_property_readonly("robots",
                             [](const Scenario& s) {
                               std::vector<std::pair<std::uint64_t, NodeIndex>> out;
                               for (const RobotSpec& r : s.robots) out.emplace_back(r.label.value, r.node);
                               return out;
                             })
      .def("single_source", &Scenario::singleSource)
      .def("render", &renderScenario)
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; })
      .def("__repr__", [](const Scenario& s) {
        return "<Scenario n=" + std::to_string(s.n) + " L=" + std::to_string(s.maxLabel) + " k=" + std::to_string(s.k()) + ">";
      });

  m.def("parse_scenario", [](const std::string& text) { return parseScenario(text); });
  m.def("load_scenario", &loadScenarioFile);
  m.def("gen_single_source", &genSingleSource, py::arg("n"), py::arg("k"), py::arg("maxlabel"), py::arg("seed"));
  m.def("gen_multi_source", &genMultiSource, py::arg("n"), py::arg("k"), py::arg("maxlabel"), py::arg("max_groups"),
        py::arg("seed"));
  m.def("gen_chain", &genChain, py::arg("group_sizes"), py::arg("gap"), py::arg("n"), py::arg("maxlabel"));

  m.def(
      "run",
      [](const Scenario& s, const std::string& rules, std::optional<std::uint32_t> maxPhases, bool verbose) {
        RunOptions options;
        options.maxPhases = maxPhases;
        const RunOutcome out = run(s, ruleset(rules), options);
        py::dict d;
        d["outcome"] = std::string(toString(out.result));
        d["rounds"] = out.roundsUsed;
        d["phases"] = out.phasesUsed;
        std::vector<NodeIndex> final;
        for (std::size_t i = 0; i < s.k(); ++i) final.push_back(out.finalConfiguration.placement.nodeOf(static_cast<RobotId>(i)));
        d["final_nodes"] = final;
        d["trace"] = traceToString(*out.trace, verbose);
        return d;
      },
      py::arg("scenario"), py::arg("ruleset") = "repaired", py::arg("max_phases") = py::none(), py::arg("verbose") = true);

  m.def(
      "validate_trace",
      [](const std::string& text, const Scenario& s) { return violationList(validateTrace(parseTrace(text), s)); },
      py::arg("trace"), py::arg("scenario"));
  m.def(
      "check_invariants", [](const std::string& text) { return violationList(checkInvariants(parseTrace(text))); },
      py::arg("trace"));

  m.def(
      "search",
      [](std::uint32_t nMax, std::uint32_t kMax, std::uint64_t lMax, const std::string& rules, const std::string& sources,
         bool minimize) {
        SearchSpec spec;
        spec.nMax = nMax;
        spec.kMax = kMax;
        spec.lMax = lMax;
        spec.ruleset = ruleset(rules);
        if (sources != "single" && sources != "multi") throw py::value_error("sources must be 'single' or 'multi'");
        spec.sources = sources == "single" ? SourceMode::Single : SourceMode::Multi;
        spec.minimize = minimize;
        SearchReport r;
        {
          py::gil_scoped_release release;
          r = exhaustiveSearch(spec);
        }
        py::dict d;
        d["runs"] = r.runs;
        d["dispersed"] = r.dispersed;
        d["livelock"] = r.livelock;
        d["budget_exceeded"] = r.budgetExceeded;
        d["model_violations"] = r.modelViolations;
        d["unexplained_failures"] = r.unexplainedFailures;
        py::dict counts;
        for (auto& [kind, count] : r.lemmaCounts) counts[py::str(std::string(1, lemmaCode(kind)))] = count;
        d["lemma_counts"] = counts;
        py::list findings;
        for (const Finding& f : r.findings) {
          py::dict fd;
          fd["scenario"] = f.minimized;
          fd["original"] = f.original;
          fd["outcome"] = std::string(toString(f.result));
          fd["failure"] = f.failure;
          fd["replay_confirmed"] = f.replayConfirmed;
          std::string codes;
          for (ViolationKind k : f.minimizedKinds) codes += lemmaCode(k);
          fd["lemmas"] = codes;
          findings.append(fd);
        }
        d["findings"] = findings;
        d["report"] = formatReport(r);
        return d;
      },
      py::arg("n_max"), py::arg("k_max"), py::arg("l_max"), py::arg("ruleset") = "repaired",
      py::arg("sources") = "multi", py::arg("minimize") = true);

  m.def(
      "sweep",
      [](const std::string& vary, std::uint64_t from, std::uint64_t to, std::uint64_t step, std::uint32_t seeds,
         std::uint32_t n, std::uint32_t k, std::uint64_t maxLabel, bool log2, const std::string& rules) {
        SweepSpec spec;
        const auto axis = sweepAxisFromString(vary);
        if (!axis) throw py::value_error("vary must be 'k', 'L' or 'n'");
        spec.vary = *axis;
        spec.from = from;
        spec.to = to;
        spec.step = step;
        spec.seeds = seeds;
        spec.n = n;
        spec.k = k;
        spec.maxLabel = maxLabel;
        spec.exponent = log2;
        spec.ruleset = ruleset(rules);
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = runSweep(spec);
        }
        py::dict d;
        d["csv"] = sweepCsv(rows);
        if (auto fit = fitRounds(rows)) {
          d["fit"] = py::dict(py::arg("a") = fit->a, py::arg("b") = fit->b, py::arg("c") = fit->c,
                              py::arg("r2") = fit->r2, py::arg("samples") = fit->samples);
        } else {
          d["fit"] = py::none();
        }
        return d;
      },
      py::arg("vary"), py::arg("start"), py::arg("stop"), py::arg("step") = 1, py::arg("seeds") = 1,
      py::arg("n") = 32, py::arg("k") = 4, py::arg("maxlabel") = 1023, py::arg("log2") = false,
      py::arg("ruleset") = "repaired");
}
