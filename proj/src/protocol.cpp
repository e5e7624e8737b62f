#include "ringdisp/protocol.hpp"

#include <string>

#include "ringdisp/errors.hpp"

namespace ringdisp {

std::string_view toString(Ruleset r) { return r == Ruleset::Literal ? "literal" : "repaired"; }

std::optional<Ruleset> rulesetFromString(std::string_view text) {
  if (text == "literal") return Ruleset::Literal;
  if (text == "repaired") return Ruleset::Repaired;
  return std::nullopt;
}

namespace {

constexpr bool inRange(std::uint32_t r, std::uint32_t lo, std::uint32_t hi) { return r >= lo && r <= hi; }

// Leader column of the printed table: only rounds 5-7 and 9-11.
constexpr bool leaderRound(std::uint32_t r) { return inRange(r, 5, 7) || inRange(r, 9, 11); }

}  // namespace

bool ParticipationTable::published(Status status, std::uint32_t r, bool leader) {
  bool byStatus = false;
  switch (status) {
    case Status::LeaderElection: byStatus = inRange(r, 1, 5); break;
    case Status::ActiveMerge: byStatus = inRange(r, 6, 8); break;
    case Status::ActiveDisperse: byStatus = inRange(r, 9, 15) || inRange(r, 17, 19); break;
    case Status::Passive: byStatus = inRange(r, 9, 12) || inRange(r, 15, 17) || r == 19; break;
    case Status::Wait: byStatus = r == 14 || r == 17; break;
    case Status::Jump: byStatus = r == 17; break;
    case Status::Idle: byStatus = false; break;
  }
  return byStatus && (!leader || leaderRound(r));
}

bool ParticipationTable::governing(Status status, std::uint32_t r, bool leader) {
  switch (status) {
    case Status::LeaderElection:
      return leader ? r == 5 : inRange(r, 1, 5);
    case Status::ActiveMerge:
      return leader ? inRange(r, 6, 7) : r == 8;
    case Status::ActiveDisperse:
      return leader ? inRange(r, 9, 11) : (inRange(r, 12, 15) || inRange(r, 17, 19));
    case Status::Passive:
      return leader ? inRange(r, 9, 11) : (r == 12 || inRange(r, 15, 17) || r == 19);
    case Status::Wait:
      return !leader && r == 17;
    case Status::Jump:
      return !leader && (r == 14 || r == 17);
    case Status::Idle:
      return false;
  }
  return false;
}

std::optional<Port> ParticipationTable::movePort(Status status, std::uint32_t r, bool leader) {
  if (!governing(status, r, leader)) return std::nullopt;
  switch (status) {
    case Status::LeaderElection:
      if (leader) return std::nullopt;
      if (r == 1 || r == 2 || r == 5) return Port::One;
      return Port::Zero;
    case Status::ActiveMerge:
      if (leader) return r == 6 ? Port::One : Port::Zero;
      return Port::One;
    case Status::ActiveDisperse:
      if (leader) return r == 11 ? Port::Zero : Port::One;
      if (r == 13 || r == 14 || r == 18) return Port::One;
      if (r == 12 || r == 15 || r == 19) return Port::Zero;
      return std::nullopt;
    case Status::Passive:
      if (leader) return r == 11 ? Port::Zero : Port::One;
      if (r == 12 || r == 16) return Port::Zero;
      if (r == 17) return Port::One;
      return std::nullopt;
    case Status::Jump:
      return r == 14 ? std::optional<Port>(Port::One) : std::nullopt;
    case Status::Wait:
    case Status::Idle:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

Decision stay(const RobotState& s) { return Decision{Action::stay(), s}; }
Decision go(RobotState s, Port p) { return Decision{Action::go(p), std::move(s)}; }

// Rounds 9-11, shared by ActiveDisperse and Passive leaders: probe two nodes
// ahead and come back one, so the leader ends up just past the chain front.
Decision leaderProbe(const RobotState& robot, const Observation& obs, std::uint32_t r) {
  RobotState s = robot;
  if (r == 9 && !s.advance && !obs.alone) {
    s.advance = true;
    return go(std::move(s), Port::One);
  }
  if (r == 10 && s.advance && obs.alone) return go(std::move(s), Port::One);
  if (r == 11 && s.advance && obs.alone) {
    s.advance = false;
    return go(std::move(s), Port::Zero);
  }
  return stay(robot);
}

// Round 12: a foreign leader arrived; step back and turn passive.
std::optional<Decision> retreatOnLeaderArrival(const RobotState& robot, const Observation& obs,
                                               const ProtocolContext& ctx) {
  const bool arrived = ctx.ruleset == Ruleset::Literal ? obs.increase
                                                       : latchWindow(robot.obsLog, 10, 12, Flag::Increase);
  if (!arrived) return std::nullopt;
  RobotState s = robot;
  s.pendingStatus = Status::Passive;
  return go(std::move(s), Port::Zero);
}

std::uint8_t disperseBit(const RobotState& s, MaxSize maxSize) {
  if (s.dispBit > maxSize.bits) return 0;
  return bitAt(s.label, s.dispBit, maxSize);
}

}  // namespace

Decision leaderElectionStep(const RobotState& robot, const Observation& obs, std::uint32_t r,
                            const ProtocolContext& ctx) {
  RobotState s = robot;
  switch (r) {
    case 1:
      // proceed=2 robots are retired candidates and stay inert.
      if (s.proceed != 0) return stay(robot);
      if (obs.alone) {
        s.leader = true;
        return stay(s);
      }
      if (bitAt(s.label, s.leBit, ctx.maxSize) == 1) {
        s.proceed = 1;
        return go(std::move(s), Port::One);
      }
      return stay(robot);
    case 2:
      if (s.proceed == 0 && obs.decrease) {
        s.proceed = 2;
        s.moveVar = 1;  // marks this phase's informer so round 3 brings it back
        return go(std::move(s), Port::One);
      }
      return stay(robot);
    case 3:
      if (s.proceed == 2) return s.moveVar == 1 ? go(std::move(s), Port::Zero) : stay(robot);
      if (s.proceed == 1) {
        if (ctx.ruleset == Ruleset::Literal && !obs.increase) s.proceed = 0;
        return go(std::move(s), Port::Zero);
      }
      return stay(robot);
    case 4:
      if (s.proceed == 1) return go(std::move(s), Port::Zero);
      return stay(robot);
    case 5: {
      std::optional<Port> move;
      if (s.proceed == 1) {
        if (obs.alone) s.leader = true;
        s.proceed = 0;
        move = Port::One;
      }
      if (s.leBit >= ctx.maxSize.bits) {
        s.pendingStatus = Status::ActiveMerge;
      } else {
        ++s.leBit;
      }
      return Decision{Action{move}, std::move(s)};
    }
    default:
      return stay(robot);
  }
}

Decision activeMergeStep(const RobotState& robot, const Observation& obs, std::uint32_t r,
                         const ProtocolContext& ctx) {
  RobotState s = robot;
  if (s.leader) {
    if (r == 6) return go(std::move(s), Port::One);
    if (r == 7 && obs.alone) {
      s.pendingStatus = Status::ActiveDisperse;
      return go(std::move(s), Port::Zero);
    }
    return stay(robot);
  }
  if (r != 8) return stay(robot);
  if (ctx.ruleset == Ruleset::Literal) {
    if (!obs.increase) return go(std::move(s), Port::One);
    s.pendingStatus = Status::ActiveDisperse;
    return stay(s);
  }
  // Repaired: stop when the leader came back during round 7, follow it when it left during round 6.
  if (obs.increase) {
    s.pendingStatus = Status::ActiveDisperse;
    return stay(s);
  }
  if (s.obsLog.at(7).decrease) return go(std::move(s), Port::One);
  return stay(robot);
}

Decision activeDisperseStep(const RobotState& robot, const Observation& obs, std::uint32_t r,
                            const ProtocolContext& ctx) {
  if (robot.leader) return leaderProbe(robot, obs, r);
  RobotState s = robot;
  switch (r) {
    case 12:
      if (auto d = retreatOnLeaderArrival(robot, obs, ctx)) return *d;
      return stay(robot);
    case 13:
      if (obs.alone && !s.start) {
        s.start = true;
        return stay(s);
      }
      if (obs.alone && s.start) {
        s.settle = true;
        return stay(s);
      }
      {
        const std::uint8_t bit = disperseBit(s, ctx.maxSize);
        if (s.dispBit <= ctx.maxSize.bits) ++s.dispBit;
        if (bit == 1) {
          s.moveVar = 1;
          return go(std::move(s), Port::One);
        }
      }
      return stay(s);
    case 14:
      if (s.moveVar == 0 && obs.decrease) {
        s.moveVar = 2;
        return go(std::move(s), Port::One);
      }
      return stay(robot);
    case 15:
      if (s.moveVar == 0) {
        s.pendingStatus = Status::Passive;
        return stay(s);
      }
      if ((s.moveVar == 1 && !obs.increase) || s.moveVar == 2) {
        s.pendingStatus = Status::Passive;
        return go(std::move(s), Port::Zero);
      }
      return stay(robot);
    case 17:
      // Only robots that moved in round 13 and stayed on the new node; the
      // ones that went back in round 15 keep their passive verdict.
      if (s.moveVar == 1 && s.obsLog.at(15).increase) {
        s.pendingStatus = obs.decrease ? Status::Wait : Status::ActiveDisperse;
        s.start = false;
        return stay(s);
      }
      return stay(robot);
    case 18:
      if (s.settle) return go(std::move(s), Port::One);
      return stay(robot);
    case 19:
      if (s.settle) {
        s.pendingStatus = Status::Idle;
        return go(std::move(s), Port::Zero);
      }
      return stay(robot);
    default:
      return stay(robot);
  }
}

Decision passiveStep(const RobotState& robot, const Observation& obs, std::uint32_t r, const ProtocolContext& ctx) {
  if (robot.leader) return leaderProbe(robot, obs, r);
  RobotState s = robot;
  switch (r) {
    case 12:
      if (auto d = retreatOnLeaderArrival(robot, obs, ctx)) return *d;
      return stay(robot);
    case 15:
      if (obs.increase) {
        s.moveVar = 1;
        return stay(s);
      }
      return stay(robot);
    case 16:
      if (s.moveVar == 1) return go(std::move(s), Port::Zero);
      return stay(robot);
    case 17:
      if (s.moveVar == 0) {
        s.pendingStatus = Status::ActiveDisperse;
        return stay(s);
      }
      s.pendingStatus = Status::Jump;
      return go(std::move(s), Port::One);
    case 19:
      if (obs.increase) {
        s.start = true;
        return stay(s);
      }
      return stay(robot);
    default:
      return stay(robot);
  }
}

Decision jumpStep(const RobotState& robot, const Observation& obs, std::uint32_t r, const ProtocolContext&) {
  RobotState s = robot;
  if (r == 14) return go(std::move(s), Port::One);
  if (r == 17) {
    s.pendingStatus = obs.decrease ? Status::Wait : Status::ActiveDisperse;
    return stay(s);
  }
  return stay(robot);
}

Decision waitStep(const RobotState& robot, const Observation&, std::uint32_t r, const ProtocolContext&) {
  if (r != 17) return stay(robot);
  RobotState s = robot;
  s.pendingStatus = Status::Passive;
  return stay(s);
}

Decision step(const RobotState& robot, const Observation& obs, std::uint32_t r, const ProtocolContext& ctx) {
  if (r < 1 || r > kRoundsPerPhase) throw ContractViolation("round in phase out of range: " + std::to_string(r));
  if (!ParticipationTable::governing(robot.status, r, robot.leader)) return stay(robot);
  switch (robot.status) {
    case Status::LeaderElection: return leaderElectionStep(robot, obs, r, ctx);
    case Status::ActiveMerge: return activeMergeStep(robot, obs, r, ctx);
    case Status::ActiveDisperse: return activeDisperseStep(robot, obs, r, ctx);
    case Status::Passive: return passiveStep(robot, obs, r, ctx);
    case Status::Jump: return jumpStep(robot, obs, r, ctx);
    case Status::Wait: return waitStep(robot, obs, r, ctx);
    case Status::Idle: return stay(robot);
  }
  return stay(robot);
}

}  // namespace ringdisp
