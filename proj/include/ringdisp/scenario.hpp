#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ringdisp/ring.hpp"
#include "ringdisp/robot.hpp"

namespace ringdisp {

struct RobotSpec {
  Label label;
  NodeIndex node = 0;
  friend bool operator==(const RobotSpec&, const RobotSpec&) = default;
};

/// A ring, the global label bound L and the initial robots (k = robots.size()).
struct Scenario {
  std::uint32_t n = 3;
  std::uint64_t maxLabel = 0;
  std::vector<RobotSpec> robots;

  std::size_t k() const noexcept { return robots.size(); }
  RingSize ring() const { return RingSize(n); }
  MaxSize maxSize() const { return MaxSize::forMaxLabel(maxLabel); }
  bool singleSource() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ScenarioError naming the violated rule: n >= 3, 1 <= k < n,
/// labels distinct and within [0, L], nodes within the ring.
void validateScenario(const Scenario& s);

/// Non-fatal remarks, e.g. L < k (labels still distinct, but below the usual L >= k).
std::vector<std::string> scenarioWarnings(const Scenario& s);

/// Grammar: one directive per line, '#' starts a comment.
///   ring <n>
///   maxlabel <L>
///   robot <label> <node>
Scenario parseScenario(std::string_view text);
std::string renderScenario(const Scenario& s);

Scenario loadScenarioFile(const std::string& path);
void saveScenarioFile(const Scenario& s, const std::string& path, std::string_view comment = {});

/// All k robots on node 0, labels drawn without replacement from [0, L].
Scenario genSingleSource(std::uint32_t n, std::uint32_t k, std::uint64_t maxLabel, std::uint64_t seed);

/// Between 1 and maxGroups occupied nodes chosen at random, every group non-empty.
Scenario genMultiSource(std::uint32_t n, std::uint32_t k, std::uint64_t maxLabel, std::uint32_t maxGroups,
                        std::uint64_t seed);

/// One chain of consecutive groups on nodes 0..p-1, labels 0..k-1 in chain order,
/// followed by at least `gap` empty nodes.
Scenario genChain(const std::vector<std::uint32_t>& groupSizes, std::uint32_t gap, std::uint32_t n,
                  std::uint64_t maxLabel);

}  // namespace ringdisp
