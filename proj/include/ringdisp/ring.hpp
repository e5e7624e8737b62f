#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ringdisp {

using NodeIndex = std::uint32_t;
using RobotId = std::uint32_t;

/// Number of nodes of the ring. Always at least 3.
class RingSize {
 public:
  explicit RingSize(std::uint32_t n);

  std::uint32_t value() const noexcept { return n_; }
  friend bool operator==(RingSize, RingSize) = default;

 private:
  std::uint32_t n_;
};

/// Port 0 leads to the predecessor, port 1 to the successor, at every node.
enum class Port : std::uint8_t { Zero = 0, One = 1 };

NodeIndex succ(RingSize n, NodeIndex v);
NodeIndex pred(RingSize n, NodeIndex v);
NodeIndex neighbour(RingSize n, NodeIndex v, Port port);

/// Shortest hop count between two nodes in either direction.
std::uint32_t ringDistance(RingSize n, NodeIndex a, NodeIndex b);

struct Move {
  RobotId robot;
  Port port;
};

/// Where every robot is. Robot ids are dense indices 0..k-1; nodes never leak into protocol code.
class Placement {
 public:
  Placement(RingSize ring, std::span<const NodeIndex> nodeOfRobot);

  RingSize ring() const noexcept { return ring_; }
  std::size_t robotCount() const noexcept { return byRobot_.size(); }

  NodeIndex nodeOf(RobotId robot) const;
  /// Robots at node v, ascending by id.
  const std::vector<RobotId>& robotsAt(NodeIndex v) const;
  std::uint32_t countAt(NodeIndex v) const { return static_cast<std::uint32_t>(robotsAt(v).size()); }
  std::vector<std::uint32_t> occupancy() const;
  const std::vector<NodeIndex>& nodes() const noexcept { return byRobot_; }

  bool allDistinct() const;
  /// Checks that byNode and byRobot describe the same placement.
  bool consistent() const;

  friend bool operator==(const Placement&, const Placement&) = default;

 private:
  RingSize ring_;
  std::vector<std::vector<RobotId>> byNode_;
  std::vector<NodeIndex> byRobot_;
};

/// Applies all moves at once. Robots not listed stay put.
/// Crossing the same edge in opposite directions is a plain swap.
Placement applyMoves(const Placement& p, std::span<const Move> moves);

}  // namespace ringdisp
