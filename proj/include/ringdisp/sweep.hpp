#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ringdisp/engine.hpp"
#include "ringdisp/verify.hpp"

namespace ringdisp {

enum class SweepAxis : std::uint8_t { K, L, N };
std::string_view toString(SweepAxis a);
std::optional<SweepAxis> sweepAxisFromString(std::string_view text);

struct SweepSpec {
  SweepAxis vary = SweepAxis::L;
  std::uint64_t from = 1;
  std::uint64_t to = 0;
  std::uint64_t step = 1;
  // With `exponent`, a varied value v stands for L = 2^v - 1 (only meaningful for the L axis).
  bool exponent = false;
  std::uint32_t seeds = 1;
  std::uint64_t firstSeed = 0;
  std::uint32_t n = 32;
  std::uint32_t k = 4;
  std::uint64_t maxLabel = 1023;
  SourceMode sources = SourceMode::Single;
  std::uint32_t maxGroups = 0;  // multi-source only; 0 means k
  Ruleset ruleset = Ruleset::Repaired;
  std::optional<std::uint32_t> maxPhases;
  unsigned workers = 0;
};

struct SweepRow {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint64_t maxLabel = 0;
  std::uint64_t seed = 0;
  Ruleset ruleset = Ruleset::Repaired;
  // Dispersed, Livelock, BudgetExceeded, or "invalid" when the point admits no scenario.
  std::string outcome;
  std::uint64_t rounds = 0;
  std::uint32_t phases = 0;
  std::string error;
};

struct LinearFit {
  double a = 0.0;  // per MaxSize bit
  double b = 0.0;  // per robot
  double c = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
};

/// Values of the varied parameter, in order. Empty when from > to.
std::vector<std::uint64_t> sweepValues(const SweepSpec& spec);
/// One row per (value, seed); a failing point is recorded in its row, never thrown.
std::vector<SweepRow> runSweep(const SweepSpec& spec);
/// Least-squares fit rounds ~ a*MaxSize + b*k + c over Dispersed rows.
/// Collinear columns (a constant k, say) get a zero coefficient.
std::optional<LinearFit> fitRounds(const std::vector<SweepRow>& rows);

void writeSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string sweepCsv(const std::vector<SweepRow>& rows);

}  // namespace ringdisp
