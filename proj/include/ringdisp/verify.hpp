#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ringdisp/engine.hpp"

namespace ringdisp {

/// Maximal run of consecutive occupied nodes, listed clockwise from the node whose predecessor is empty.
struct Chain {
  std::vector<NodeIndex> nodes;
  std::vector<RobotId> robots;  // ascending id
};

/// Requires at least one empty node.
std::vector<Chain> chainView(const Placement& p);

enum class ViolationKind : std::uint8_t {
  // Model checks (validateTrace).
  TraceStructure,
  MoveLegality,
  Perception,
  Gating,
  IdleMoved,
  StatusSchedule,
  OutcomeMismatch,
  // Lemma checks (checkInvariants), codes a-i, plus the per-phase displacement
  // property and the settled-too-early check.
  UniqueLeader,           // a
  CrossChainColocation,   // b
  AdjacentActiveMerge,    // c
  Alternation,            // d
  Distinguished,          // e
  StatusBudget,           // f
  StatusBackEdge,         // g
  MergeCompletion,        // h
  CursorAlignment,        // i
  PhaseDisplacement,      // p
  IdleRejoined,           // s: a robot shares a node with one that already settled
  LeaderMultiplicity,     // m: a chain outside the unique-leader premise ends election with several leaders
};

std::string_view toString(ViolationKind k);
/// One-letter code for lemma checks ('a'..'i', 'm', 'p', 's'), '-' for model checks.
char lemmaCode(ViolationKind k);
bool isLemmaCheck(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::uint32_t phase = 0;
  std::uint32_t roundInPhase = 0;
  std::vector<Label> robots;
  std::vector<NodeIndex> nodes;
  std::string detail;
  std::optional<Scenario> reproduction;
};

std::string describe(const Violation& v);

/// Replays the trace against the ring model: one-edge moves with matching
/// ports, recomputed observations, participation gating, Idle immobility,
/// phase-aligned status changes and the footer's outcome. Non-verbose traces
/// only get the move checks. Throws TraceError on a truncated trace or a
/// trace recorded for a different scenario.
std::vector<Violation> validateTrace(const Trace& trace, const Scenario& scenario);

/// Lemma-derived checks, each scoped to its premise. Needs a verbose trace.
std::vector<Violation> checkInvariants(const Trace& trace);

/// Lower-bound sanity for a dispersed single-source run: some robot ends at
/// ring distance >= ceil((k-1)/2) from the source, and at least that many rounds were used.
/// Throws NotApplicable for multi-source scenarios or runs that did not disperse.
bool displacementBound(const Trace& trace, const Scenario& scenario);

/// 19 * 8 * (MaxSize + k) rounds.
std::uint64_t roundBudget(const Scenario& s);

enum class SourceMode : std::uint8_t { Single, Multi };

struct SearchSpec {
  std::uint32_t nMin = 3;
  std::uint32_t nMax = 5;
  std::uint32_t kMin = 1;
  std::uint32_t kMax = 3;
  std::uint64_t lMin = 1;
  std::uint64_t lMax = 3;
  Ruleset ruleset = Ruleset::Repaired;
  SourceMode sources = SourceMode::Multi;  // Multi enumerates every placement, single-source ones included
  bool minimize = true;
  std::size_t maxLemmaFindings = 25;  // dispersed runs with lemma violations that get minimized
  unsigned workers = 0;               // 0: workerCount()
};

class SearchTooLarge : public std::runtime_error {
 public:
  SearchTooLarge(std::uint64_t estimate, std::uint64_t limit);
  std::uint64_t estimate() const noexcept { return estimate_; }

 private:
  std::uint64_t estimate_;
};

inline constexpr std::uint64_t kSearchLimit = 10'000'000;

/// Number of scenarios `exhaustiveSearch` would run.
std::uint64_t searchSize(const SearchSpec& spec);
/// Every scenario described by `spec`, one representative per rotation class
/// (the smallest label sits on node 0), in a fixed order.
std::vector<Scenario> enumerateScenarios(const SearchSpec& spec);

struct RunSummary {
  RunResult result = RunResult::Dispersed;
  std::uint64_t roundsUsed = 0;
  std::uint32_t phasesUsed = 0;
  bool withinBudget = true;
  std::size_t modelViolations = 0;
  std::vector<ViolationKind> lemmaKinds;  // distinct kinds found
  std::optional<bool> displacementOk;     // single-source dispersed runs only
};

struct Finding {
  Scenario original;
  Scenario minimized;
  RunResult result = RunResult::Dispersed;
  bool withinBudget = true;
  std::vector<ViolationKind> kinds;   // lemma checks violated by the original run
  std::vector<ViolationKind> minimizedKinds;
  bool replayConfirmed = false;       // minimized scenario reproduces the same outcome bit-for-bit
  bool failure = false;               // did not disperse within budget
  bool explained() const;             // a failure with at least one violated lemma, or not a failure
};

struct SearchReport {
  SearchSpec spec;
  std::size_t runs = 0;
  std::size_t dispersed = 0;
  std::size_t livelock = 0;
  std::size_t budgetExceeded = 0;
  std::size_t overRoundBudget = 0;
  std::size_t modelViolations = 0;
  std::size_t displacementChecked = 0;
  std::size_t displacementFailed = 0;
  double maxBudgetFraction = 0.0;  // max roundsUsed / roundBudget over dispersed runs
  std::vector<std::pair<ViolationKind, std::size_t>> lemmaCounts;  // runs with each kind
  std::vector<Finding> findings;
  std::size_t unexplainedFailures = 0;
  std::size_t lemmaOnlyRuns = 0;  // dispersed runs with lemma violations (excluding cursor alignment)
};

/// Runs and checks one scenario the way the search does.
RunSummary summarizeRun(const Scenario& s, Ruleset ruleset, Trace* keepTrace = nullptr);

/// Greedy shrinking: drop robots, then empty nodes, while `stillFails` holds.
Scenario minimizeScenario(const Scenario& s, const std::function<bool(const Scenario&)>& stillFails);

SearchReport exhaustiveSearch(const SearchSpec& spec);
std::string formatReport(const SearchReport& report);

}  // namespace ringdisp
