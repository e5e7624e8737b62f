#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "ringdisp/perception.hpp"
#include "ringdisp/ring.hpp"
#include "ringdisp/robot.hpp"

namespace ringdisp {

/// Literal runs the published pseudocode as written; Repaired swaps in the
/// merge follow/stop rule, the latched round-12 arrival check and the
/// always-probe leader-election round 3.
enum class Ruleset : std::uint8_t { Literal, Repaired };

std::string_view toString(Ruleset r);
std::optional<Ruleset> rulesetFromString(std::string_view text);

struct Action {
  std::optional<Port> move;  // nullopt = stay

  bool isStay() const noexcept { return !move.has_value(); }
  static Action stay() { return {}; }
  static Action go(Port p) { return Action{p}; }
  friend bool operator==(const Action&, const Action&) = default;
};

/// Outcome of one robot's local computation: where to go, and its state afterwards.
struct Decision {
  Action action;
  RobotState next;
};

struct ProtocolContext {
  MaxSize maxSize;
  Ruleset ruleset = Ruleset::Repaired;
};

/// Which (status, round, leader?) combinations run their subroutine.
///
/// `governing` is what the simulator executes and follows the subroutine
/// pseudocode. `published` is the status-by-round table as printed; the two
/// disagree for Wait and Jump at round 14, where the pseudocode wins.
class ParticipationTable {
 public:
  static bool published(Status status, std::uint32_t roundInPhase, bool leader);
  static bool governing(Status status, std::uint32_t roundInPhase, bool leader);
  /// The single port a participating robot may use in that round, or nullopt if it never moves then.
  static std::optional<Port> movePort(Status status, std::uint32_t roundInPhase, bool leader);
};

/// One robot, one round. Pure: same inputs, same decision.
/// `robot.obsLog` must already hold `obs` as its last entry.
Decision step(const RobotState& robot, const Observation& obs, std::uint32_t roundInPhase,
              const ProtocolContext& ctx);

Decision leaderElectionStep(const RobotState& robot, const Observation& obs, std::uint32_t roundInPhase,
                            const ProtocolContext& ctx);
Decision activeMergeStep(const RobotState& robot, const Observation& obs, std::uint32_t roundInPhase,
                         const ProtocolContext& ctx);
Decision activeDisperseStep(const RobotState& robot, const Observation& obs, std::uint32_t roundInPhase,
                            const ProtocolContext& ctx);
Decision passiveStep(const RobotState& robot, const Observation& obs, std::uint32_t roundInPhase,
                     const ProtocolContext& ctx);
Decision jumpStep(const RobotState& robot, const Observation& obs, std::uint32_t roundInPhase,
                  const ProtocolContext& ctx);
Decision waitStep(const RobotState& robot, const Observation& obs, std::uint32_t roundInPhase,
                  const ProtocolContext& ctx);

}  // namespace ringdisp
