#include "ringdisp/robot.hpp"

#include <array>
#include <bit>
#include <string>

#include "ringdisp/errors.hpp"

namespace ringdisp {

MaxSize MaxSize::forMaxLabel(std::uint64_t maxLabel) {
  if (maxLabel == 0) return MaxSize{1};
  return MaxSize{static_cast<std::uint32_t>(std::bit_width(maxLabel))};
}

namespace {

constexpr std::array<std::string_view, 7> kStatusNames{
    "leader-election", "active-merge", "active-disperse", "passive", "wait", "jump", "idle"};

bool isDispersionStatus(Status s) {
  return s == Status::ActiveDisperse || s == Status::Passive || s == Status::Wait || s == Status::Jump;
}

}  // namespace

std::string_view toString(Status s) { return kStatusNames[static_cast<std::size_t>(s)]; }

std::optional<Status> statusFromString(std::string_view text) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == text) return static_cast<Status>(i);
  }
  return std::nullopt;
}

bool isAllowedTransition(Status from, Status to) {
  if (from == to) return true;
  switch (from) {
    case Status::LeaderElection:
      return to == Status::ActiveMerge;
    case Status::ActiveMerge:
      return to == Status::ActiveDisperse;
    case Status::ActiveDisperse:
    case Status::Passive:
    case Status::Wait:
    case Status::Jump:
      return isDispersionStatus(to) || to == Status::Idle;
    case Status::Idle:
      return false;
  }
  return false;
}

RobotState initialRobotState(Label label) {
  RobotState s;
  s.label = label;
  return s;
}

std::uint8_t bitAt(Label label, std::uint32_t i, MaxSize maxSize) {
  if (i < 1 || i > maxSize.bits) {
    throw ContractViolation("bit index " + std::to_string(i) + " outside [1, " + std::to_string(maxSize.bits) + "]");
  }
  if (i > 64) return 0;
  return static_cast<std::uint8_t>((label.value >> (i - 1)) & 1U);
}

RobotState applyPendingStatus(RobotState s) {
  if (s.pendingStatus) {
    if (!isAllowedTransition(s.status, *s.pendingStatus)) {
      throw InvariantViolation("illegal status transition " + std::string(toString(s.status)) + " -> " +
                               std::string(toString(*s.pendingStatus)) + " for label " +
                               std::to_string(s.label.value));
    }
    s.status = *s.pendingStatus;
    s.pendingStatus.reset();
  }
  s.moveVar = 0;
  s.obsLog.clear();
  return s;
}

}  // namespace ringdisp
