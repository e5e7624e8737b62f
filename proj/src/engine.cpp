#include "ringdisp/engine.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "ringdisp/errors.hpp"

namespace ringdisp {

std::string_view toString(RunResult r) {
  switch (r) {
    case RunResult::Dispersed: return "Dispersed";
    case RunResult::Livelock: return "Livelock";
    case RunResult::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

std::optional<RunResult> runResultFromString(std::string_view text) {
  for (auto r : {RunResult::Dispersed, RunResult::Livelock, RunResult::BudgetExceeded}) {
    if (toString(r) == text) return r;
  }
  return std::nullopt;
}

Configuration Configuration::fromScenario(const Scenario& s) {
  validateScenario(s);
  Configuration c;
  c.ring = RingSize(s.n);
  c.maxSize = s.maxSize();
  std::vector<NodeIndex> nodes;
  nodes.reserve(s.k());
  for (const RobotSpec& r : s.robots) {
    nodes.push_back(r.node);
    c.robots.push_back(initialRobotState(r.label));
  }
  c.placement = Placement(c.ring, nodes);
  c.movedLastRound.assign(s.k(), false);
  return c;
}

std::uint32_t defaultPhaseBudget(MaxSize maxSize, std::size_t k) {
  return static_cast<std::uint32_t>(8 * (maxSize.bits + k) + 16);
}

void advanceRound(Configuration& c, Ruleset ruleset, TraceRecord* record) {
  const std::uint32_t rip = c.roundInPhase;
  const ProtocolContext ctx{c.maxSize, ruleset};
  const std::size_t k = c.robots.size();

  std::vector<Move> moves;
  std::vector<RobotState> next;
  next.reserve(k);
  if (record) {
    record->globalRound = c.globalRound;
    record->phase = c.phase;
    record->roundInPhase = rip;
    record->robots.assign(k, RobotRecord{});
  }

  for (RobotId id = 0; id < k; ++id) {
    const NodeIndex at = c.placement.nodeOf(id);
    std::optional<std::uint32_t> before;
    if (!c.previousOccupancy.empty()) before = c.previousOccupancy[at];
    const Observation obs = observe(c.placement.countAt(at), before, c.movedLastRound[id], rip);

    RobotState seen = c.robots[id];
    seen.obsLog.push(obs);
    Decision d = seen.status == Status::Idle ? Decision{Action::stay(), seen} : step(seen, obs, rip, ctx);
    if (d.action.move) moves.push_back(Move{id, *d.action.move});

    if (record) {
      RobotRecord& rr = record->robots[id];
      rr.label = seen.label;
      rr.status = seen.status;
      rr.leader = seen.leader;
      rr.dispBit = seen.dispBit;
      rr.pendingAfter = d.next.pendingStatus;
      rr.obs = obs;
      rr.port = d.action.move;
      rr.from = at;
    }
    next.push_back(std::move(d.next));
  }

  c.previousOccupancy = c.placement.occupancy();
  c.placement = applyMoves(c.placement, moves);
  std::fill(c.movedLastRound.begin(), c.movedLastRound.end(), false);
  for (const Move& m : moves) c.movedLastRound[m.robot] = true;
  c.robots = std::move(next);
  ++c.globalRound;

  if (record) {
    for (RobotId id = 0; id < k; ++id) record->robots[id].to = c.placement.nodeOf(id);
    record->occupancy = c.placement.occupancy();
  }

  if (rip == kRoundsPerPhase) {
    for (RobotState& s : c.robots) s = applyPendingStatus(std::move(s));
    ++c.phase;
    c.roundInPhase = 1;
  } else {
    ++c.roundInPhase;
  }
}

std::pair<Configuration, TraceRecord> stepRound(const Configuration& c, Ruleset ruleset) {
  Configuration next = c;
  TraceRecord record;
  advanceRound(next, ruleset, &record);
  return {std::move(next), std::move(record)};
}

namespace {

void putInt(std::string& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::string encodeRobot(const RobotState& s, bool moved) {
  std::string out;
  putInt(out, s.label.value, 8);
  out.push_back(static_cast<char>(s.status));
  out.push_back(static_cast<char>(s.pendingStatus ? 1 + static_cast<int>(*s.pendingStatus) : 0));
  out.push_back(static_cast<char>(s.leader));
  out.push_back(static_cast<char>(s.proceed));
  out.push_back(static_cast<char>(s.moveVar));
  out.push_back(static_cast<char>(s.start | (s.settle << 1) | (s.advance << 2) | (moved << 3)));
  putInt(out, s.leBit, 4);
  putInt(out, s.dispBit, 4);
  putInt(out, s.obsLog.size(), 1);
  for (std::uint32_t r = 1; r <= s.obsLog.size(); ++r) {
    const Observation& o = s.obsLog.at(r);
    out.push_back(static_cast<char>(o.alone | (o.increase << 1) | (o.decrease << 2)));
  }
  return out;
}

}  // namespace

SnapshotKey snapshotKey(const Configuration& c) {
  const std::uint32_t n = c.ring.value();
  // Per-node encoding; robots are listed by label so ids do not matter.
  std::vector<std::string> node(n);
  for (NodeIndex v = 0; v < n; ++v) {
    std::vector<std::pair<Label, std::string>> here;
    for (RobotId id : c.placement.robotsAt(v)) {
      here.emplace_back(c.robots[id].label, encodeRobot(c.robots[id], c.movedLastRound[id]));
    }
    std::sort(here.begin(), here.end());
    std::string& out = node[v];
    putInt(out, c.previousOccupancy.empty() ? 0xFFFFFFFFu : c.previousOccupancy[v], 4);
    putInt(out, here.size(), 4);
    for (auto& [_, bytes] : here) out += bytes;
  }
  SnapshotKey best;
  bool first = true;
  for (NodeIndex r = 0; r < n; ++r) {
    // Only rotations that start on an occupied node; that set is rotation-equivariant, so the minimum is canonical.
    if (c.placement.countAt(r) == 0 && c.placement.robotCount() > 0) continue;
    std::string candidate;
    for (NodeIndex i = 0; i < n; ++i) candidate += node[(r + i) % n];
    if (first || candidate < best.bytes) {
      best.bytes = std::move(candidate);
      first = false;
    }
  }
  std::string header;
  putInt(header, c.roundInPhase, 4);
  best.bytes.insert(0, header);
  return best;
}

RunOutcome run(const Configuration& initial, Ruleset ruleset, const RunOptions& options) {
  const std::uint32_t budget = options.maxPhases.value_or(defaultPhaseBudget(initial.maxSize, initial.robots.size()));
  if (initial.roundInPhase != 1) throw ConfigurationError("run must start at a phase boundary");

  RunOutcome out;
  out.finalConfiguration = initial;
  Configuration& c = out.finalConfiguration;
  if (options.recordTrace) {
    out.trace.emplace();
    out.trace->ruleset = ruleset;
    for (RobotId id = 0; id < c.robots.size(); ++id) {
      out.trace->scenario.robots.push_back(RobotSpec{c.robots[id].label, c.placement.nodeOf(id)});
    }
    out.trace->scenario.n = c.ring.value();
    out.trace->scenario.maxLabel = c.maxSize.bits >= 64 ? UINT64_MAX : (std::uint64_t{1} << c.maxSize.bits) - 1;
  }

  std::set<SnapshotKey> seen;
  seen.insert(snapshotKey(c));
  std::uint32_t phasesDone = 0;
  std::optional<RunResult> result;
  while (!result) {
    if (phasesDone >= budget) {
      result = RunResult::BudgetExceeded;
      break;
    }
    std::size_t phaseMoves = 0;
    for (std::uint32_t r = 0; r < kRoundsPerPhase; ++r) {
      TraceRecord rec;
      advanceRound(c, ruleset, options.recordTrace ? &rec : nullptr);
      phaseMoves += static_cast<std::size_t>(std::count(c.movedLastRound.begin(), c.movedLastRound.end(), true));
      if (options.recordTrace) out.trace->records.push_back(std::move(rec));
    }
    ++phasesDone;
    if (phaseMoves == 0 && c.placement.allDistinct()) {
      result = RunResult::Dispersed;
    } else if (!seen.insert(snapshotKey(c)).second) {
      result = RunResult::Livelock;
    }
  }
  out.result = *result;
  out.roundsUsed = c.globalRound;
  out.phasesUsed = phasesDone;
  if (out.trace) out.trace->footer = TraceFooter{out.result, out.roundsUsed, out.phasesUsed};
  return out;
}

RunOutcome run(const Scenario& scenario, Ruleset ruleset, const RunOptions& options) {
  RunOutcome out = run(Configuration::fromScenario(scenario), ruleset, options);
  if (out.trace) out.trace->scenario = scenario;
  return out;
}

}  // namespace ringdisp
