#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "ringdisp/perception.hpp"

namespace ringdisp {

struct Label {
  std::uint64_t value = 0;
  friend auto operator<=>(const Label&, const Label&) = default;
};

/// Padded label width shared by all robots: floor(log2 L) + 1, and 1 for L = 0.
struct MaxSize {
  std::uint32_t bits = 1;

  static MaxSize forMaxLabel(std::uint64_t maxLabel);
  friend auto operator<=>(const MaxSize&, const MaxSize&) = default;
};

enum class Status : std::uint8_t { LeaderElection, ActiveMerge, ActiveDisperse, Passive, Wait, Jump, Idle };

std::string_view toString(Status s);
std::optional<Status> statusFromString(std::string_view text);

/// Edge of the status graph; self-loops are always allowed.
bool isAllowedTransition(Status from, Status to);

struct RobotState {
  Label label;
  Status status = Status::LeaderElection;
  std::optional<Status> pendingStatus;
  bool leader = false;
  std::uint8_t proceed = 0;  // 0, 1 or 2; survives phase boundaries
  std::uint8_t moveVar = 0;  // 0, 1 or 2; reset every phase
  bool start = false;
  bool settle = false;
  bool advance = false;
  std::uint32_t leBit = 1;    // next bit for leader election, 1 = least significant
  std::uint32_t dispBit = 1;  // next bit for dispersion; MaxSize+1 once exhausted
  ObservationLog obsLog;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

RobotState initialRobotState(Label label);

/// i-th least significant bit (1-based) of the label zero-padded to `maxSize` bits.
std::uint8_t bitAt(Label label, std::uint32_t i, MaxSize maxSize);

/// Phase boundary: commit the deferred status, reset move, drop the phase's observations.
/// Throws InvariantViolation when the pending status is not reachable from the current one.
RobotState applyPendingStatus(RobotState s);

}  // namespace ringdisp
