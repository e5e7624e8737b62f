#include "ringdisp/perception.hpp"

#include <algorithm>
#include <string>

#include "ringdisp/errors.hpp"

namespace ringdisp {

void ObservationLog::push(const Observation& obs) {
  if (size_ == kRoundsPerPhase) throw ContractViolation("observation log overflow: phase has 19 rounds");
  if (obs.roundInPhase != size_ + 1) {
    throw ContractViolation("observation for round " + std::to_string(obs.roundInPhase) +
                            " appended after round " + std::to_string(size_));
  }
  entries_[size_++] = obs;
}

const Observation& ObservationLog::at(std::uint32_t roundInPhase) const {
  if (roundInPhase < 1 || roundInPhase > size_) {
    throw ContractViolation("no observation for round " + std::to_string(roundInPhase) + " (log holds " +
                            std::to_string(size_) + ")");
  }
  return entries_[roundInPhase - 1];
}

bool operator==(const ObservationLog& a, const ObservationLog& b) {
  return a.size_ == b.size_ && std::equal(a.entries_.begin(), a.entries_.begin() + a.size_, b.entries_.begin());
}

Observation observe(std::uint32_t currentCount, std::optional<std::uint32_t> previousCount,
                    bool movedLastRound, std::uint32_t roundInPhase) {
  Observation obs;
  obs.roundInPhase = roundInPhase;
  obs.alone = currentCount == 1;
  if (!movedLastRound && previousCount) {
    obs.increase = currentCount > *previousCount;
    obs.decrease = currentCount < *previousCount;
  }
  return obs;
}

bool latchWindow(const ObservationLog& log, std::uint32_t fromRound, std::uint32_t toRound, Flag flag) {
  if (fromRound < 1 || fromRound > toRound || toRound > log.size()) {
    throw ContractViolation("latch window [" + std::to_string(fromRound) + ", " + std::to_string(toRound) +
                            "] outside the rounds observed so far (" + std::to_string(log.size()) + ")");
  }
  for (std::uint32_t r = fromRound; r <= toRound; ++r) {
    const Observation& o = log.at(r);
    if (flag == Flag::Increase ? o.increase : o.decrease) return true;
  }
  return false;
}

}  // namespace ringdisp
