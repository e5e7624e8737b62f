#include "ringdisp/ring.hpp"

#include <algorithm>
#include <string>

#include "ringdisp/errors.hpp"

namespace ringdisp {

RingSize::RingSize(std::uint32_t n) : n_(n) {
  if (n < 3) throw ConfigurationError("ring needs at least 3 nodes, got " + std::to_string(n));
}

NodeIndex succ(RingSize n, NodeIndex v) { return (v + 1) % n.value(); }

NodeIndex pred(RingSize n, NodeIndex v) { return (v + n.value() - 1) % n.value(); }

NodeIndex neighbour(RingSize n, NodeIndex v, Port port) {
  return port == Port::One ? succ(n, v) : pred(n, v);
}

std::uint32_t ringDistance(RingSize n, NodeIndex a, NodeIndex b) {
  const std::uint32_t d = (b + n.value() - a) % n.value();
  return std::min(d, n.value() - d);
}

Placement::Placement(RingSize ring, std::span<const NodeIndex> nodeOfRobot)
    : ring_(ring), byNode_(ring.value()), byRobot_(nodeOfRobot.begin(), nodeOfRobot.end()) {
  for (RobotId r = 0; r < byRobot_.size(); ++r) {
    if (byRobot_[r] >= ring.value()) {
      throw ConfigurationError("robot " + std::to_string(r) + " placed on node " +
                               std::to_string(byRobot_[r]) + " outside ring of size " +
                               std::to_string(ring.value()));
    }
    byNode_[byRobot_[r]].push_back(r);
  }
}

NodeIndex Placement::nodeOf(RobotId robot) const {
  if (robot >= byRobot_.size()) throw ConfigurationError("unknown robot " + std::to_string(robot));
  return byRobot_[robot];
}

const std::vector<RobotId>& Placement::robotsAt(NodeIndex v) const {
  if (v >= byNode_.size()) throw ConfigurationError("unknown node " + std::to_string(v));
  return byNode_[v];
}

std::vector<std::uint32_t> Placement::occupancy() const {
  std::vector<std::uint32_t> counts(byNode_.size());
  for (std::size_t v = 0; v < byNode_.size(); ++v) counts[v] = static_cast<std::uint32_t>(byNode_[v].size());
  return counts;
}

bool Placement::allDistinct() const {
  return std::all_of(byNode_.begin(), byNode_.end(), [](const auto& rs) { return rs.size() <= 1; });
}

bool Placement::consistent() const {
  std::size_t seen = 0;
  for (NodeIndex v = 0; v < byNode_.size(); ++v) {
    if (!std::is_sorted(byNode_[v].begin(), byNode_[v].end())) return false;
    for (RobotId r : byNode_[v]) {
      if (r >= byRobot_.size() || byRobot_[r] != v) return false;
      ++seen;
    }
  }
  return seen == byRobot_.size();
}

Placement applyMoves(const Placement& p, std::span<const Move> moves) {
  std::vector<NodeIndex> next = p.nodes();
  std::vector<bool> moved(next.size(), false);
  for (const Move& m : moves) {
    if (m.robot >= next.size()) throw ConfigurationError("move for unknown robot " + std::to_string(m.robot));
    if (moved[m.robot]) throw ConfigurationError("robot " + std::to_string(m.robot) + " moved twice in one round");
    moved[m.robot] = true;
    next[m.robot] = neighbour(p.ring(), p.nodeOf(m.robot), m.port);
  }
  return Placement(p.ring(), next);
}

}  // namespace ringdisp
