// Command-line driver: run, sweep, search, verify.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "ringdisp/engine.hpp"
#include "ringdisp/errors.hpp"
#include "ringdisp/scenario.hpp"
#include "ringdisp/sweep.hpp"
#include "ringdisp/trace_io.hpp"
#include "ringdisp/verify.hpp"

namespace {

using namespace ringdisp;

constexpr int kExitDispersed = 0;
constexpr int kExitViolations = 1;
constexpr int kExitLivelock = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInput = 4;

int exitFor(RunResult r) {
  switch (r) {
    case RunResult::Dispersed: return kExitDispersed;
    case RunResult::Livelock: return kExitLivelock;
    case RunResult::BudgetExceeded: return kExitBudget;
  }
  return kExitInput;
}

Ruleset parseRuleset(const std::string& text) {
  const auto r = rulesetFromString(text);
  if (!r) throw ConfigurationError("unknown ruleset '" + text + "' (literal|repaired)");
  return *r;
}

SourceMode parseSources(const std::string& text) {
  if (text == "single") return SourceMode::Single;
  if (text == "multi") return SourceMode::Multi;
  throw ConfigurationError("unknown source mode '" + text + "' (single|multi)");
}

struct RunArgs {
  std::string scenario;
  std::string ruleset = "repaired";
  std::optional<std::uint32_t> maxPhases;
  std::string trace;
  bool verbose = false;
};

int cmdRun(const RunArgs& a) {
  const Scenario s = loadScenarioFile(a.scenario);
  for (const std::string& w : scenarioWarnings(s)) std::cerr << "warning: " << w << "\n";
  RunOptions options;
  options.maxPhases = a.maxPhases;
  options.recordTrace = !a.trace.empty();
  const RunOutcome out = run(s, parseRuleset(a.ruleset), options);
  if (out.trace) saveTraceFile(*out.trace, a.trace, a.verbose);
  std::cout << toString(out.result) << " rounds=" << out.roundsUsed << " phases=" << out.phasesUsed << "\n";
  std::cout << "final";
  for (std::size_t i = 0; i < s.k(); ++i) {
    std::cout << " " << s.robots[i].label.value << "@" << out.finalConfiguration.placement.nodeOf(static_cast<RobotId>(i));
  }
  std::cout << "\n";
  return exitFor(out.result);
}

struct SweepArgs {
  std::string vary = "L";
  std::uint64_t from = 1, to = 0, step = 1;
  bool exponent = false;
  std::uint32_t seeds = 1;
  std::uint64_t firstSeed = 0;
  std::uint32_t n = 32, k = 4;
  std::uint64_t maxLabel = 1023;
  std::string sources = "single";
  std::uint32_t maxGroups = 0;
  std::string ruleset = "repaired";
  std::optional<std::uint32_t> maxPhases;
  std::string out;
};

int cmdSweep(const SweepArgs& a) {
  SweepSpec spec;
  const auto axis = sweepAxisFromString(a.vary);
  if (!axis) throw ConfigurationError("--vary takes k, L or n");
  spec.vary = *axis;
  spec.from = a.from;
  spec.to = a.to;
  spec.step = a.step;
  spec.exponent = a.exponent;
  spec.seeds = a.seeds;
  spec.firstSeed = a.firstSeed;
  spec.n = a.n;
  spec.k = a.k;
  spec.maxLabel = a.maxLabel;
  spec.sources = parseSources(a.sources);
  spec.maxGroups = a.maxGroups;
  spec.ruleset = parseRuleset(a.ruleset);
  spec.maxPhases = a.maxPhases;
  const auto rows = runSweep(spec);
  if (a.out.empty()) {
    writeSweepCsv(std::cout, rows);
  } else {
    std::ofstream f(a.out);
    if (!f) throw ConfigurationError("cannot write " + a.out);
    writeSweepCsv(f, rows);
  }
  std::size_t invalid = 0;
  for (const SweepRow& r : rows) invalid += r.outcome == "invalid";
  if (invalid) std::cerr << invalid << " point(s) admit no scenario and were skipped\n";
  if (const auto fit = fitRounds(rows)) {
    std::cerr << std::setprecision(4) << "fit rounds ~ " << fit->a << "*MaxSize + " << fit->b << "*k + " << fit->c
              << "  R^2=" << fit->r2 << "  (" << fit->samples << " dispersed rows)\n";
  } else {
    std::cerr << "fit: fewer than two dispersed rows\n";
  }
  return 0;
}

struct SearchArgs {
  SearchSpec spec;
  std::string ruleset = "repaired";
  std::string sources = "multi";
  std::string out;
  bool noMinimize = false;
};

int cmdSearch(SearchArgs a) {
  a.spec.ruleset = parseRuleset(a.ruleset);
  a.spec.sources = parseSources(a.sources);
  a.spec.minimize = !a.noMinimize;
  const SearchReport report = exhaustiveSearch(a.spec);
  std::cout << formatReport(report);
  if (!a.out.empty()) std::filesystem::create_directories(a.out);
  std::size_t index = 0;
  for (const Finding& f : report.findings) {
    std::string kinds;
    for (ViolationKind k : f.minimizedKinds) kinds += std::string(kinds.empty() ? "" : ",") + lemmaCode(k);
    std::cout << (f.failure ? "failure " : "finding ") << index << ": " << toString(f.result)
              << " lemmas=" << (kinds.empty() ? "-" : kinds) << " replay=" << (f.replayConfirmed ? "ok" : "MISMATCH")
              << (f.failure && !f.explained() ? " UNEXPLAINED" : "") << "\n";
    if (!a.out.empty()) {
      const std::string path = a.out + "/finding_" + std::to_string(index) + ".scn";
      std::string comment = std::string(f.failure ? "failure" : "finding") + ": outcome " +
                            std::string(toString(f.result)) + " under " + std::string(toString(a.spec.ruleset)) +
                            "; lemmas " + (kinds.empty() ? "-" : kinds);
      saveScenarioFile(f.minimized, path, comment);
    }
    ++index;
  }
  return 0;
}

struct VerifyArgs {
  std::string trace;
  std::string scenario;
  bool invariants = false;
};

int cmdVerify(const VerifyArgs& a) {
  const Scenario s = loadScenarioFile(a.scenario);
  const Trace t = loadTraceFile(a.trace);
  const auto violations = validateTrace(t, s);
  for (const Violation& v : violations) std::cout << "violation: " << describe(v) << "\n";
  if (a.invariants && t.detailed) {
    for (const Violation& v : checkInvariants(t)) std::cout << "finding: " << describe(v) << "\n";
  }
  std::cout << violations.size() << " violation(s)\n";
  return violations.empty() ? 0 : kExitViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Silent-robot dispersion on an oriented ring: simulator and checker"};
  app.require_subcommand(1);

  RunArgs runArgs;
  auto* runCmd = app.add_subcommand("run", "Simulate one scenario");
  runCmd->add_option("--scenario", runArgs.scenario, "Scenario file")->required();
  runCmd->add_option("--ruleset", runArgs.ruleset, "literal or repaired");
  runCmd->add_option("--max-phases", runArgs.maxPhases, "Phase budget (default 8*(MaxSize+k)+16)");
  runCmd->add_option("--trace", runArgs.trace, "Write a trace file");
  runCmd->add_flag("--verbose", runArgs.verbose, "Include per-robot state in the trace");

  SweepArgs sweepArgs;
  auto* sweepCmd = app.add_subcommand("sweep", "Run a parameter sweep and print CSV");
  sweepCmd->add_option("--vary", sweepArgs.vary, "k, L or n");
  sweepCmd->add_option("--from", sweepArgs.from)->required();
  sweepCmd->add_option("--to", sweepArgs.to)->required();
  sweepCmd->add_option("--step", sweepArgs.step);
  sweepCmd->add_flag("--log2", sweepArgs.exponent, "Varied L values are exponents: L = 2^v - 1");
  sweepCmd->add_option("--seeds", sweepArgs.seeds, "Seeds per point");
  sweepCmd->add_option("--first-seed", sweepArgs.firstSeed);
  sweepCmd->add_option("--n", sweepArgs.n);
  sweepCmd->add_option("--k", sweepArgs.k);
  sweepCmd->add_option("--L", sweepArgs.maxLabel);
  sweepCmd->add_option("--sources", sweepArgs.sources, "single or multi");
  sweepCmd->add_option("--max-groups", sweepArgs.maxGroups);
  sweepCmd->add_option("--ruleset", sweepArgs.ruleset);
  sweepCmd->add_option("--max-phases", sweepArgs.maxPhases);
  sweepCmd->add_option("--out", sweepArgs.out, "CSV file (default stdout)");

  SearchArgs searchArgs;
  auto* searchCmd = app.add_subcommand("search", "Exhaustive bounded search with invariant checks");
  searchCmd->add_option("--n-min", searchArgs.spec.nMin);
  searchCmd->add_option("--n-max", searchArgs.spec.nMax)->required();
  searchCmd->add_option("--k-min", searchArgs.spec.kMin);
  searchCmd->add_option("--k-max", searchArgs.spec.kMax)->required();
  searchCmd->add_option("--l-min", searchArgs.spec.lMin);
  searchCmd->add_option("--l-max", searchArgs.spec.lMax)->required();
  searchCmd->add_option("--ruleset", searchArgs.ruleset);
  searchCmd->add_option("--sources", searchArgs.sources, "single or multi");
  searchCmd->add_option("--max-lemma-findings", searchArgs.spec.maxLemmaFindings);
  searchCmd->add_flag("--no-minimize", searchArgs.noMinimize);
  searchCmd->add_option("--out", searchArgs.out, "Directory for finding scenario files");

  VerifyArgs verifyArgs;
  auto* verifyCmd = app.add_subcommand("verify", "Check a trace against the model");
  verifyCmd->add_option("--trace", verifyArgs.trace)->required();
  verifyCmd->add_option("--scenario", verifyArgs.scenario)->required();
  verifyCmd->add_flag("--invariants", verifyArgs.invariants, "Also list invariant findings (verbose traces)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*runCmd) return cmdRun(runArgs);
    if (*sweepCmd) return cmdSweep(sweepArgs);
    if (*searchCmd) return cmdSearch(searchArgs);
    if (*verifyCmd) return cmdVerify(verifyArgs);
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error [" << e.rule() << "]: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
