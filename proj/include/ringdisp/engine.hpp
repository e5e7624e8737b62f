#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ringdisp/protocol.hpp"
#include "ringdisp/ring.hpp"
#include "ringdisp/robot.hpp"
#include "ringdisp/scenario.hpp"

namespace ringdisp {

/// Global state between rounds. Robot i of `robots` is robot id i in `placement`.
struct Configuration {
  RingSize ring{3};
  MaxSize maxSize;
  Placement placement{RingSize{3}, {}};
  std::vector<RobotState> robots;
  std::uint64_t globalRound = 0;  // rounds executed so far
  std::uint32_t phase = 1;
  std::uint32_t roundInPhase = 1;

  // Perception history: occupancy at the start of the previous round (empty
  // before the first round) and whether each robot moved in that round.
  std::vector<std::uint32_t> previousOccupancy;
  std::vector<bool> movedLastRound;

  static Configuration fromScenario(const Scenario& s);
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct RobotRecord {
  Label label;
  Status status = Status::LeaderElection;     // status during the round
  bool leader = false;                        // before the round's decision
  std::uint32_t dispBit = 1;                  // before the round's decision
  std::optional<Status> pendingAfter;         // pending status after the decision
  Observation obs;
  std::optional<Port> port;
  NodeIndex from = 0;
  NodeIndex to = 0;

  friend bool operator==(const RobotRecord&, const RobotRecord&) = default;
};

struct TraceRecord {
  std::uint64_t globalRound = 0;
  std::uint32_t phase = 1;
  std::uint32_t roundInPhase = 1;
  std::vector<RobotRecord> robots;      // by robot id
  std::vector<std::uint32_t> occupancy;  // after the round

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

enum class RunResult : std::uint8_t { Dispersed, Livelock, BudgetExceeded };
std::string_view toString(RunResult r);
std::optional<RunResult> runResultFromString(std::string_view text);

struct TraceFooter {
  RunResult result = RunResult::Dispersed;
  std::uint64_t roundsUsed = 0;
  std::uint32_t phasesUsed = 0;
  friend bool operator==(const TraceFooter&, const TraceFooter&) = default;
};

struct Trace {
  Scenario scenario;
  Ruleset ruleset = Ruleset::Repaired;
  bool detailed = true;  // false when only moves were recorded (non-verbose trace file)
  std::vector<TraceRecord> records;
  std::optional<TraceFooter> footer;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct RunOutcome {
  RunResult result = RunResult::Dispersed;
  std::uint64_t roundsUsed = 0;
  std::uint32_t phasesUsed = 0;
  Configuration finalConfiguration;
  std::optional<Trace> trace;
};

struct RunOptions {
  std::optional<std::uint32_t> maxPhases;  // default: defaultPhaseBudget
  bool recordTrace = true;
};

/// 8 * (MaxSize + k) + 16 phases.
std::uint32_t defaultPhaseBudget(MaxSize maxSize, std::size_t k);

/// Executes one synchronous round: observe, decide against the pre-round
/// state, commit all moves at once; at round 19 apply pending statuses.
std::pair<Configuration, TraceRecord> stepRound(const Configuration& c, Ruleset ruleset);
/// In-place variant of stepRound; `record` may be null.
void advanceRound(Configuration& c, Ruleset ruleset, TraceRecord* record);

RunOutcome run(const Configuration& initial, Ruleset ruleset, const RunOptions& options = {});
RunOutcome run(const Scenario& scenario, Ruleset ruleset, const RunOptions& options = {});

/// Phase-boundary state up to ring rotation. Includes the perception history,
/// so equal keys mean the two configurations have identical futures.
struct SnapshotKey {
  std::string bytes;
  friend auto operator<=>(const SnapshotKey&, const SnapshotKey&) = default;
};

SnapshotKey snapshotKey(const Configuration& c);

}  // namespace ringdisp
