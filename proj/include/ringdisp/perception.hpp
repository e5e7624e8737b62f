#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace ringdisp {

inline constexpr std::uint32_t kRoundsPerPhase = 19;

/// What a silent robot senses at the start of a round. Nothing else is observable.
struct Observation {
  bool alone = false;
  bool increase = false;
  bool decrease = false;
  std::uint32_t roundInPhase = 1;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Observations of the running phase, one per round, in round order.
class ObservationLog {
 public:
  void push(const Observation& obs);
  void clear() noexcept { size_ = 0; }

  std::uint32_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  /// Entry recorded at the given round of the current phase.
  const Observation& at(std::uint32_t roundInPhase) const;

  friend bool operator==(const ObservationLog& a, const ObservationLog& b);

 private:
  std::array<Observation, kRoundsPerPhase> entries_{};
  std::uint32_t size_ = 0;
};

enum class Flag : std::uint8_t { Increase, Decrease };

/// Perception under weak multiplicity detection with net-change flags.
///
/// `previousCount` is the occupancy of the robot's node one round earlier, or
/// nullopt before the first round. A robot that moved in the previous round
/// gets no increase/decrease: the flags only describe a node it stayed at.
Observation observe(std::uint32_t currentCount, std::optional<std::uint32_t> previousCount,
                    bool movedLastRound, std::uint32_t roundInPhase);

/// True iff `flag` was raised at any round in [fromRound, toRound] of the log.
bool latchWindow(const ObservationLog& log, std::uint32_t fromRound, std::uint32_t toRound, Flag flag);

}  // namespace ringdisp
