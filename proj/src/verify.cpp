#include "ringdisp/verify.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ringdisp/errors.hpp"
#include "ringdisp/parallel.hpp"
#include "ringdisp/trace_io.hpp"

namespace ringdisp {

std::vector<Chain> chainView(const Placement& p) {
  const std::uint32_t n = p.ring().value();
  std::optional<NodeIndex> empty;
  for (NodeIndex v = 0; v < n && !empty; ++v) {
    if (p.countAt(v) == 0) empty = v;
  }
  if (!empty) throw ContractViolation("chain view needs an empty node");
  std::vector<Chain> chains;
  for (std::uint32_t i = 1; i <= n; ++i) {
    const NodeIndex v = (*empty + i) % n;
    if (p.countAt(v) == 0) continue;
    if (p.countAt(pred(p.ring(), v)) == 0) chains.emplace_back();
    chains.back().nodes.push_back(v);
    for (RobotId r : p.robotsAt(v)) chains.back().robots.push_back(r);
  }
  for (Chain& c : chains) std::sort(c.robots.begin(), c.robots.end());
  return chains;
}

std::string_view toString(ViolationKind k) {
  switch (k) {
    case ViolationKind::TraceStructure: return "trace-structure";
    case ViolationKind::MoveLegality: return "move-legality";
    case ViolationKind::Perception: return "perception";
    case ViolationKind::Gating: return "gating";
    case ViolationKind::IdleMoved: return "idle-moved";
    case ViolationKind::StatusSchedule: return "status-schedule";
    case ViolationKind::OutcomeMismatch: return "outcome-mismatch";
    case ViolationKind::UniqueLeader: return "unique-leader";
    case ViolationKind::CrossChainColocation: return "cross-chain-colocation";
    case ViolationKind::AdjacentActiveMerge: return "adjacent-active-merge";
    case ViolationKind::Alternation: return "alternation";
    case ViolationKind::Distinguished: return "distinguished-pair";
    case ViolationKind::StatusBudget: return "status-budget";
    case ViolationKind::StatusBackEdge: return "status-back-edge";
    case ViolationKind::MergeCompletion: return "merge-completion";
    case ViolationKind::CursorAlignment: return "cursor-alignment";
    case ViolationKind::PhaseDisplacement: return "phase-displacement";
    case ViolationKind::IdleRejoined: return "idle-rejoined";
    case ViolationKind::LeaderMultiplicity: return "leader-multiplicity";
  }
  return "?";
}

char lemmaCode(ViolationKind k) {
  switch (k) {
    case ViolationKind::UniqueLeader: return 'a';
    case ViolationKind::CrossChainColocation: return 'b';
    case ViolationKind::AdjacentActiveMerge: return 'c';
    case ViolationKind::Alternation: return 'd';
    case ViolationKind::Distinguished: return 'e';
    case ViolationKind::StatusBudget: return 'f';
    case ViolationKind::StatusBackEdge: return 'g';
    case ViolationKind::MergeCompletion: return 'h';
    case ViolationKind::CursorAlignment: return 'i';
    case ViolationKind::PhaseDisplacement: return 'p';
    case ViolationKind::IdleRejoined: return 's';
    case ViolationKind::LeaderMultiplicity: return 'm';
    default: return '-';
  }
}

bool isLemmaCheck(ViolationKind k) { return lemmaCode(k) != '-'; }

std::string describe(const Violation& v) {
  std::ostringstream out;
  out << toString(v.kind);
  if (isLemmaCheck(v.kind)) out << " (" << lemmaCode(v.kind) << ")";
  out << " at phase " << v.phase;
  if (v.roundInPhase) out << " round " << v.roundInPhase;
  if (!v.robots.empty()) {
    out << " robots";
    for (const Label& l : v.robots) out << " " << l.value;
  }
  if (!v.nodes.empty()) {
    out << " nodes";
    for (NodeIndex n : v.nodes) out << " " << n;
  }
  if (!v.detail.empty()) out << ": " << v.detail;
  return out.str();
}

namespace {

Violation make(ViolationKind kind, std::uint32_t phase, std::uint32_t rip, std::vector<Label> robots,
               std::vector<NodeIndex> nodes, std::string detail) {
  return Violation{kind, phase, rip, std::move(robots), std::move(nodes), std::move(detail), std::nullopt};
}

std::vector<std::uint32_t> countNodes(std::uint32_t n, const std::vector<NodeIndex>& pos) {
  std::vector<std::uint32_t> counts(n, 0);
  for (NodeIndex v : pos) ++counts[v];
  return counts;
}

bool sameRobots(const Scenario& a, const Scenario& b) { return a.n == b.n && a.robots == b.robots; }

}  // namespace

std::vector<Violation> validateTrace(const Trace& trace, const Scenario& scenario) {
  if (!sameRobots(trace.scenario, scenario)) throw TraceError("trace was recorded for a different scenario");
  if (!trace.footer) throw TraceError("truncated trace: no end record");
  std::vector<Violation> out;
  const RingSize ring(scenario.n);
  const std::size_t k = scenario.k();
  const bool detailed = trace.detailed;

  std::vector<NodeIndex> pos;
  for (const RobotSpec& r : scenario.robots) pos.push_back(r.node);
  std::vector<std::uint32_t> previous;  // occupancy at start of previous round
  std::vector<bool> moved(k, false);
  std::size_t phaseMoves = 0;
  std::size_t lastPhaseMoves = 0;

  for (std::size_t t = 0; t < trace.records.size(); ++t) {
    const TraceRecord& rec = trace.records[t];
    const auto phase = static_cast<std::uint32_t>(t / kRoundsPerPhase + 1);
    const auto rip = static_cast<std::uint32_t>(t % kRoundsPerPhase + 1);
    if (rec.globalRound != t || rec.phase != phase || rec.roundInPhase != rip) {
      out.push_back(make(ViolationKind::TraceStructure, rec.phase, rec.roundInPhase, {}, {},
                         "round counters disagree with position " + std::to_string(t) + " in the trace"));
    }
    if (rec.robots.size() != k) {
      throw TraceError("trace round " + std::to_string(t) + " lists " + std::to_string(rec.robots.size()) +
                       " robots, scenario has " + std::to_string(k));
    }
    if (rip == 1) {
      lastPhaseMoves = phaseMoves;
      phaseMoves = 0;
    }
    const std::vector<std::uint32_t> counts = countNodes(scenario.n, pos);
    std::vector<NodeIndex> next = pos;
    for (std::size_t i = 0; i < k; ++i) {
      const RobotRecord& rr = rec.robots[i];
      const Label label = scenario.robots[i].label;
      if (rr.label != label) throw TraceError("trace robot order differs from scenario");
      if (rr.port) {
        ++phaseMoves;
        const NodeIndex expected = neighbour(ring, pos[i], *rr.port);
        if (rr.from != pos[i] || rr.to != expected) {
          out.push_back(make(ViolationKind::MoveLegality, phase, rip, {label}, {rr.from, rr.to},
                             "robot at node " + std::to_string(pos[i]) + " taking port " +
                                 std::to_string(static_cast<int>(*rr.port)) + " must reach " + std::to_string(expected)));
        }
        next[i] = expected;
      } else if (detailed && (rr.from != pos[i] || rr.to != pos[i])) {
        out.push_back(make(ViolationKind::MoveLegality, phase, rip, {label}, {rr.from, rr.to},
                           "robot that stays must remain on node " + std::to_string(pos[i])));
      }

      if (!detailed) continue;
      std::optional<std::uint32_t> before;
      if (!previous.empty()) before = previous[pos[i]];
      const Observation expectedObs = observe(counts[pos[i]], before, moved[i], rip);
      if (!(rr.obs == expectedObs)) {
        out.push_back(make(ViolationKind::Perception, phase, rip, {label}, {pos[i]},
                           "recorded (alone,inc,dec)=(" + std::to_string(rr.obs.alone) + "," +
                               std::to_string(rr.obs.increase) + "," + std::to_string(rr.obs.decrease) +
                               ") but the model gives (" + std::to_string(expectedObs.alone) + "," +
                               std::to_string(expectedObs.increase) + "," + std::to_string(expectedObs.decrease) + ")"));
      }
      if (rr.port) {
        if (rr.status == Status::Idle) {
          out.push_back(make(ViolationKind::IdleMoved, phase, rip, {label}, {pos[i]}, "idle robot moved"));
        } else {
          const auto allowed = ParticipationTable::movePort(rr.status, rip, rr.leader);
          if (!allowed || *allowed != *rr.port) {
            out.push_back(make(ViolationKind::Gating, phase, rip, {label}, {pos[i]},
                               std::string(toString(rr.status)) + (rr.leader ? " leader" : "") + " may not take port " +
                                   std::to_string(static_cast<int>(*rr.port)) + " in this round"));
          }
        }
      }
      // Status is fixed within a phase; the pending status only changes in participating rounds.
      std::optional<Status> pendingBefore;
      if (t == 0) {
        if (rr.status != Status::LeaderElection) {
          out.push_back(make(ViolationKind::StatusSchedule, phase, rip, {label}, {}, "first status must be leader-election"));
        }
      } else {
        const RobotRecord& prev = trace.records[t - 1].robots[i];
        const Status expectedStatus = rip == 1 ? prev.pendingAfter.value_or(prev.status) : prev.status;
        if (rr.status != expectedStatus) {
          out.push_back(make(ViolationKind::StatusSchedule, phase, rip, {label}, {},
                             "status " + std::string(toString(rr.status)) + " where " +
                                 std::string(toString(expectedStatus)) + " was due"));
        }
        if (rip != 1) pendingBefore = prev.pendingAfter;
      }
      if (rr.pendingAfter != pendingBefore && !ParticipationTable::governing(rr.status, rip, rr.leader)) {
        out.push_back(make(ViolationKind::Gating, phase, rip, {label}, {},
                           "pending status changed in a round where " + std::string(toString(rr.status)) +
                               " does not participate"));
      }
    }
    if (detailed && rec.occupancy != countNodes(scenario.n, next)) {
      out.push_back(make(ViolationKind::MoveLegality, phase, rip, {}, {}, "recorded occupancy disagrees with moves"));
    }
    previous = counts;
    for (std::size_t i = 0; i < k; ++i) moved[i] = rec.robots[i].port.has_value();
    pos = std::move(next);
  }

  const TraceFooter& f = *trace.footer;
  if (f.roundsUsed != trace.records.size() || trace.records.size() % kRoundsPerPhase != 0 ||
      f.phasesUsed != trace.records.size() / kRoundsPerPhase) {
    out.push_back(make(ViolationKind::TraceStructure, 0, 0, {}, {},
                       "end record claims " + std::to_string(f.roundsUsed) + " rounds / " +
                           std::to_string(f.phasesUsed) + " phases, trace holds " +
                           std::to_string(trace.records.size()) + " rounds"));
  }
  if (trace.records.size() % kRoundsPerPhase == 0) lastPhaseMoves = phaseMoves;
  if (f.result == RunResult::Dispersed) {
    const auto counts = countNodes(scenario.n, pos);
    const bool distinct = std::all_of(counts.begin(), counts.end(), [](std::uint32_t c) { return c <= 1; });
    if (!distinct || lastPhaseMoves != 0 || trace.records.empty()) {
      out.push_back(make(ViolationKind::OutcomeMismatch, f.phasesUsed, 0, {}, {},
                         "trace claims Dispersed but the final phase is not a quiet, distinct placement"));
    }
  }
  return out;
}

namespace {

struct PhaseState {
  std::uint32_t phase = 1;
  std::vector<NodeIndex> pos;
  std::vector<Status> status;
  std::vector<bool> leader;
  std::vector<std::uint32_t> dispBit;
};

std::vector<PhaseState> phaseStates(const Trace& trace) {
  std::vector<PhaseState> out;
  for (const TraceRecord& rec : trace.records) {
    if (rec.roundInPhase != 1) continue;
    PhaseState s;
    s.phase = rec.phase;
    for (const RobotRecord& r : rec.robots) {
      s.pos.push_back(r.from);
      s.status.push_back(r.status);
      s.leader.push_back(r.leader);
      s.dispBit.push_back(r.dispBit);
    }
    out.push_back(std::move(s));
  }
  if (!trace.records.empty() && trace.records.back().roundInPhase == kRoundsPerPhase) {
    const TraceRecord& last = trace.records.back();
    PhaseState s;
    s.phase = last.phase + 1;
    for (const RobotRecord& r : last.robots) {
      s.pos.push_back(r.to);
      s.status.push_back(r.pendingAfter.value_or(r.status));
      s.leader.push_back(r.leader);
      s.dispBit.push_back(r.dispBit);
    }
    out.push_back(std::move(s));
  }
  return out;
}

bool merging(Status s) { return s == Status::LeaderElection || s == Status::ActiveMerge; }

std::int64_t signedDelta(std::uint32_t n, NodeIndex from, NodeIndex to) {
  std::int64_t d = (static_cast<std::int64_t>(to) - from + n) % n;
  if (d > static_cast<std::int64_t>(n) / 2) d -= n;
  return d;
}

}  // namespace

std::vector<Violation> checkInvariants(const Trace& trace) {
  if (!trace.detailed) throw TraceError("invariant checks need a verbose trace");
  std::vector<Violation> out;
  const Scenario& sc = trace.scenario;
  const std::size_t k = sc.k();
  const RingSize ring(sc.n);
  const std::uint32_t n = sc.n;
  const MaxSize maxSize = sc.maxSize();
  std::vector<Label> labels;
  for (const RobotSpec& r : sc.robots) labels.push_back(r.label);

  std::vector<NodeIndex> start;
  for (const RobotSpec& r : sc.robots) start.push_back(r.node);
  const Placement initial(ring, start);
  const std::vector<Chain> chains = chainView(initial);
  std::vector<std::size_t> chainOf(k);
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (RobotId r : chains[c].robots) chainOf[r] = c;
  }

  const std::vector<PhaseState> phases = phaseStates(trace);

  // (a) exactly one leader per chain whose back group holds more than one robot, once leader election is over.
  for (const PhaseState& ps : phases) {
    if (ps.phase != maxSize.bits + 1) continue;
    for (const Chain& c : chains) {
      std::vector<Label> leaders;
      for (RobotId r : c.robots) {
        if (ps.leader[r]) leaders.push_back(labels[r]);
      }
      if (leaders.size() == 1) continue;
      // (m) covers the chains the lemma says nothing about: a singleton back group elects itself.
      const bool premise = initial.countAt(c.nodes.front()) > 1;
      if (!premise && c.robots.size() == 1) continue;
      out.push_back(make(premise ? ViolationKind::UniqueLeader : ViolationKind::LeaderMultiplicity, ps.phase, 1,
                         leaders, {c.nodes.front()},
                         std::to_string(leaders.size()) + " leaders in chain starting at node " +
                             std::to_string(c.nodes.front())));
    }
  }

  // (b) per round, using positions at the start of the round.
  std::set<std::pair<std::size_t, std::size_t>> reportedB, reportedC;
  if (chains.size() > 1) {
    for (const TraceRecord& rec : trace.records) {
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          const RobotRecord& a = rec.robots[i];
          const RobotRecord& b = rec.robots[j];
          if (chainOf[i] != chainOf[j] && a.from == b.from && (merging(a.status) || merging(b.status)) &&
              reportedB.insert({i, j}).second) {
            out.push_back(make(ViolationKind::CrossChainColocation, rec.phase, rec.roundInPhase, {labels[i], labels[j]},
                               {a.from}, "robots from different chains share a node during leader election/merge"));
          }
        }
      }
    }
    // (c) on phase-start placements: a leader's round-6 probe is not the chains becoming adjacent.
    for (const PhaseState& ps : phases) {
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
          if (chainOf[i] == chainOf[j] || ringDistance(ring, ps.pos[i], ps.pos[j]) != 1) continue;
          if (ps.status[i] == Status::ActiveMerge && ps.status[j] == Status::ActiveMerge &&
              reportedC.insert({i, j}).second) {
            out.push_back(make(ViolationKind::AdjacentActiveMerge, ps.phase, 1, {labels[i], labels[j]},
                               {ps.pos[i], ps.pos[j]}, "adjacent robots of different chains both in active-merge"));
          }
        }
      }
    }
  }

  // (d) alternation between consecutive occupied nodes once the chains involved finished merging.
  for (const PhaseState& ps : phases) {
    std::vector<bool> chainMerged(chains.size(), true);
    for (std::size_t i = 0; i < k; ++i) {
      if (merging(ps.status[i])) chainMerged[chainOf[i]] = false;
    }
    // Per node: 0 = nothing to judge, 1 = all passive, 2 = all active-like, 3 = mixed, 4 = unmerged chain present.
    std::vector<int> cls(n, 0);
    for (std::size_t i = 0; i < k; ++i) {
      int& c = cls[ps.pos[i]];
      if (!chainMerged[chainOf[i]]) {
        c = 4;
        continue;
      }
      if (ps.leader[i] || ps.status[i] == Status::Idle || c == 4) continue;
      const int mine = ps.status[i] == Status::Passive ? 1 : 2;
      c = c == 0 ? mine : (c == mine ? c : 3);
    }
    for (NodeIndex v = 0; v < n; ++v) {
      const NodeIndex w = succ(ring, v);
      if (cls[v] == 0 || cls[w] == 0 || cls[v] == 4 || cls[w] == 4) continue;
      const bool ok = (cls[v] == 2 && cls[w] == 1) || (cls[v] == 1 && cls[w] == 2);
      if (!ok) {
        std::vector<Label> involved;
        for (std::size_t i = 0; i < k; ++i) {
          if ((ps.pos[i] == v || ps.pos[i] == w) && !ps.leader[i] && ps.status[i] != Status::Idle) {
            involved.push_back(labels[i]);
          }
        }
        const auto name = [](int c) { return c == 1 ? "passive" : c == 2 ? "active/wait/jump" : "mixed"; };
        out.push_back(make(ViolationKind::Alternation, ps.phase, 1, involved, {v, w},
                           std::string("neighbouring groups are ") + name(cls[v]) + " and " + name(cls[w])));
      }
    }
  }

  // (e) distinguished pairs stay distinguished (non-leaders past merging).
  std::set<std::pair<std::size_t, std::size_t>> reportedE;
  for (std::size_t p = 0; p + 1 < phases.size(); ++p) {
    const PhaseState& a = phases[p];
    const PhaseState& b = phases[p + 1];
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (a.leader[i] || a.leader[j] || b.leader[i] || b.leader[j]) continue;
        if (merging(a.status[i]) || merging(a.status[j])) continue;
        const bool wasDistinct = a.pos[i] != a.pos[j] || a.status[i] != a.status[j];
        const bool isDistinct = b.pos[i] != b.pos[j] || b.status[i] != b.status[j];
        if (wasDistinct && !isDistinct && reportedE.insert({i, j}).second) {
          out.push_back(make(ViolationKind::Distinguished, b.phase, 1, {labels[i], labels[j]}, {b.pos[i]},
                             "previously distinguished robots co-located with equal status " +
                                 std::string(toString(b.status[i]))));
        }
      }
    }
  }

  // (f) status-phase budgets after the first active-disperse phase; (g) status graph.
  for (std::size_t i = 0; i < k; ++i) {
    bool dispersing = false;
    std::size_t waits = 0, jumps = 0, passives = 0;
    bool reportedF = false, reportedG = false;
    for (std::size_t p = 0; p < phases.size(); ++p) {
      const Status s = phases[p].status[i];
      if (p > 0 && !reportedG) {
        const Status prev = phases[p - 1].status[i];
        if (!isAllowedTransition(prev, s) || (dispersing && merging(s))) {
          reportedG = true;
          out.push_back(make(ViolationKind::StatusBackEdge, phases[p].phase, 1, {labels[i]}, {},
                             std::string(toString(prev)) + " -> " + std::string(toString(s))));
        }
      }
      if (s == Status::ActiveDisperse) dispersing = true;
      if (!dispersing) continue;
      waits += s == Status::Wait;
      jumps += s == Status::Jump;
      passives += s == Status::Passive;
      if (!reportedF && (waits > k || jumps > 2 * k || passives > maxSize.bits + 2 * k)) {
        reportedF = true;
        out.push_back(make(ViolationKind::StatusBudget, phases[p].phase, 1, {labels[i]}, {},
                           "wait " + std::to_string(waits) + "/" + std::to_string(k) + ", jump " +
                               std::to_string(jumps) + "/" + std::to_string(2 * k) + ", passive " +
                               std::to_string(passives) + "/" + std::to_string(maxSize.bits + 2 * k)));
      }
    }
  }

  // (h) each chain of p groups sits on one node, all active-disperse, within p+2 phases after leader election.
  const bool cycled = trace.footer && trace.footer->result == RunResult::Livelock;
  for (const Chain& c : chains) {
    const std::uint32_t deadline = maxSize.bits + static_cast<std::uint32_t>(c.nodes.size()) + 2 + 1;
    bool done = false;
    bool observedDeadline = false;
    for (const PhaseState& ps : phases) {
      if (ps.phase > deadline) break;
      if (ps.phase == deadline) observedDeadline = true;
      const NodeIndex at = ps.pos[c.robots.front()];
      done = std::all_of(c.robots.begin(), c.robots.end(), [&](RobotId r) {
        return ps.pos[r] == at && ps.status[r] == Status::ActiveDisperse;
      });
      if (done) break;
    }
    if (!done && (observedDeadline || cycled)) {
      std::vector<Label> members;
      for (RobotId r : c.robots) members.push_back(labels[r]);
      out.push_back(make(ViolationKind::MergeCompletion, std::min<std::uint32_t>(deadline, phases.empty() ? 0 : phases.back().phase), 1,
                         members, {c.nodes.front()},
                         "chain of " + std::to_string(c.nodes.size()) + " groups not merged within " +
                             std::to_string(c.nodes.size() + 2) + " phases after leader election" +
                             (cycled && !observedDeadline ? " (run cycles)" : "")));
    }
  }

  // (i) co-located active-disperse non-leaders agree on the dispersion cursor.
  for (const PhaseState& ps : phases) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (ps.leader[i] || ps.leader[j] || ps.pos[i] != ps.pos[j]) continue;
        if (ps.status[i] != Status::ActiveDisperse || ps.status[j] != Status::ActiveDisperse) continue;
        if (ps.dispBit[i] != ps.dispBit[j]) {
          out.push_back(make(ViolationKind::CursorAlignment, ps.phase, 1, {labels[i], labels[j]}, {ps.pos[i]},
                             "cursors " + std::to_string(ps.dispBit[i]) + " and " + std::to_string(ps.dispBit[j])));
        }
      }
    }
  }

  // (p) a non-leader's net move over a phase is 0 or +1, or -1/0 after a round-12 retreat.
  std::set<std::size_t> reportedP;
  for (std::size_t p = 0; p + 1 < phases.size(); ++p) {
    const std::size_t first = p * kRoundsPerPhase;
    if (first + kRoundsPerPhase > trace.records.size()) break;
    for (std::size_t i = 0; i < k; ++i) {
      if (phases[p].leader[i] || reportedP.count(i)) continue;
      const bool retreated = trace.records[first + 11].robots[i].port == Port::Zero;
      const std::int64_t d = signedDelta(n, phases[p].pos[i], phases[p + 1].pos[i]);
      const bool ok = retreated ? (d == -1 || d == 0) : (d == 0 || d == 1);
      if (!ok) {
        reportedP.insert(i);
        out.push_back(make(ViolationKind::PhaseDisplacement, phases[p].phase, 0, {labels[i]},
                           {phases[p].pos[i], phases[p + 1].pos[i]}, "net displacement " + std::to_string(d)));
      }
    }
  }
  // (s) once a robot is Idle its node should stay private to it.
  std::set<std::pair<std::size_t, std::size_t>> reportedS;
  for (const PhaseState& ps : phases) {
    for (std::size_t i = 0; i < k; ++i) {
      if (ps.status[i] != Status::Idle) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i || ps.pos[j] != ps.pos[i] || !reportedS.insert({i, j}).second) continue;
        out.push_back(make(ViolationKind::IdleRejoined, ps.phase, 1, {labels[i], labels[j]}, {ps.pos[i]},
                           "robot " + std::to_string(labels[j].value) + " (" + std::string(toString(ps.status[j])) +
                               ") shares the node of idle robot " + std::to_string(labels[i].value)));
      }
    }
  }
  return out;
}

bool displacementBound(const Trace& trace, const Scenario& scenario) {
  if (!scenario.singleSource()) throw NotApplicable("displacement bound needs a single-source scenario");
  if (!trace.footer || trace.footer->result != RunResult::Dispersed) {
    throw NotApplicable("displacement bound needs a dispersed run");
  }
  const RingSize ring(scenario.n);
  const NodeIndex source = scenario.robots.front().node;
  const std::size_t k = scenario.k();
  const std::uint64_t need = k / 2;  // ceil((k-1)/2)
  std::uint32_t far = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const NodeIndex at = trace.records.empty() ? scenario.robots[i].node : trace.records.back().robots[i].to;
    far = std::max(far, ringDistance(ring, source, at));
  }
  return far >= need && trace.footer->roundsUsed >= need;
}

std::uint64_t roundBudget(const Scenario& s) { return 19ULL * 8ULL * (s.maxSize().bits + s.k()); }

SearchTooLarge::SearchTooLarge(std::uint64_t estimate, std::uint64_t limit)
    : std::runtime_error("search space of " + std::to_string(estimate) + " scenarios exceeds the limit of " +
                         std::to_string(limit)),
      estimate_(estimate) {}

namespace {

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    out = out * (n - r + i) / i;
    if (out > kSearchLimit * 1000) return out;
  }
  return out;
}

std::uint64_t saturatingMul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

std::uint64_t placementsPerLabelSet(const SearchSpec& spec, std::uint32_t n, std::uint32_t k) {
  if (spec.sources == SourceMode::Single) return 1;
  std::uint64_t out = 1;
  for (std::uint32_t i = 1; i < k; ++i) out = saturatingMul(out, n);
  return out;
}

}  // namespace

std::uint64_t searchSize(const SearchSpec& spec) {
  std::uint64_t total = 0;
  for (std::uint32_t n = std::max(3U, spec.nMin); n <= spec.nMax; ++n) {
    for (std::uint32_t k = std::max(1U, spec.kMin); k <= spec.kMax && k < n; ++k) {
      for (std::uint64_t L = spec.lMin; L <= spec.lMax; ++L) {
        const std::uint64_t add = saturatingMul(binomial(L + 1, k), placementsPerLabelSet(spec, n, k));
        total = add > UINT64_MAX - total ? UINT64_MAX : total + add;
        if (total > kSearchLimit * 1000) return total;
      }
    }
  }
  return total;
}

std::vector<Scenario> enumerateScenarios(const SearchSpec& spec) {
  const std::uint64_t size = searchSize(spec);
  if (size > kSearchLimit) throw SearchTooLarge(size, kSearchLimit);
  std::vector<Scenario> out;
  out.reserve(size);
  for (std::uint32_t n = std::max(3U, spec.nMin); n <= spec.nMax; ++n) {
    for (std::uint32_t k = std::max(1U, spec.kMin); k <= spec.kMax && k < n; ++k) {
      for (std::uint64_t L = spec.lMin; L <= spec.lMax; ++L) {
        if (k > L + 1) continue;
        // Label subsets in lexicographic order.
        std::vector<std::uint64_t> subset(k);
        for (std::uint32_t i = 0; i < k; ++i) subset[i] = i;
        while (true) {
          // Smallest label on node 0 fixes the rotation; the others range over all nodes.
          std::vector<NodeIndex> nodes(k, 0);
          while (true) {
            Scenario s{n, L, {}};
            for (std::uint32_t i = 0; i < k; ++i) s.robots.push_back(RobotSpec{Label{subset[i]}, nodes[i]});
            out.push_back(std::move(s));
            if (spec.sources == SourceMode::Single) break;
            std::int64_t i = static_cast<std::int64_t>(k) - 1;
            while (i >= 1 && nodes[i] == n - 1) nodes[i--] = 0;
            if (i < 1) break;
            ++nodes[i];
          }
          std::int64_t i = static_cast<std::int64_t>(k) - 1;
          while (i >= 0 && subset[i] == L + 1 - k + static_cast<std::uint64_t>(i)) --i;
          if (i < 0) break;
          ++subset[i];
          for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
        }
      }
    }
  }
  return out;
}

RunSummary summarizeRun(const Scenario& s, Ruleset ruleset, Trace* keepTrace) {
  RunOutcome outcome = run(s, ruleset);
  RunSummary sum;
  sum.result = outcome.result;
  sum.roundsUsed = outcome.roundsUsed;
  sum.phasesUsed = outcome.phasesUsed;
  sum.withinBudget = outcome.result == RunResult::Dispersed && outcome.roundsUsed <= roundBudget(s);
  const Trace& trace = *outcome.trace;
  sum.modelViolations = validateTrace(trace, s).size();
  std::set<ViolationKind> kinds;
  for (const Violation& v : checkInvariants(trace)) kinds.insert(v.kind);
  sum.lemmaKinds.assign(kinds.begin(), kinds.end());
  if (s.singleSource() && outcome.result == RunResult::Dispersed) sum.displacementOk = displacementBound(trace, s);
  if (keepTrace) *keepTrace = std::move(*outcome.trace);
  return sum;
}

Scenario minimizeScenario(const Scenario& s, const std::function<bool(const Scenario&)>& stillFails) {
  Scenario best = s;
  bool progress = true;
  while (progress) {
    progress = false;
    // Drop one robot.
    for (std::size_t i = 0; i < best.robots.size() && best.robots.size() > 1; ++i) {
      Scenario candidate = best;
      candidate.robots.erase(candidate.robots.begin() + static_cast<std::ptrdiff_t>(i));
      if (stillFails(candidate)) {
        best = std::move(candidate);
        progress = true;
        break;
      }
    }
    if (progress) continue;
    // Remove one empty node.
    for (NodeIndex v = 0; v < best.n && best.n > 3 && best.n - 1 > best.robots.size(); ++v) {
      const bool empty = std::none_of(best.robots.begin(), best.robots.end(), [&](const RobotSpec& r) { return r.node == v; });
      if (!empty) continue;
      Scenario candidate = best;
      candidate.n -= 1;
      for (RobotSpec& r : candidate.robots) {
        if (r.node > v) r.node -= 1;
      }
      if (stillFails(candidate)) {
        best = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return best;
}

bool Finding::explained() const {
  if (!failure) return true;
  return std::any_of(kinds.begin(), kinds.end(), [](ViolationKind k) { return k != ViolationKind::CursorAlignment; });
}

namespace {

bool failed(const RunSummary& s) { return !s.withinBudget; }

Finding buildFinding(const Scenario& s, const RunSummary& sum, Ruleset ruleset, bool minimize) {
  Finding f;
  f.original = s;
  f.result = sum.result;
  f.withinBudget = sum.withinBudget;
  f.failure = failed(sum);
  f.kinds = sum.lemmaKinds;
  std::function<bool(const Scenario&)> stillFails;
  if (f.failure) {
    stillFails = [&](const Scenario& c) {
      const RunSummary r = summarizeRun(c, ruleset);
      return failed(r) && r.result == sum.result;
    };
  } else {
    ViolationKind target = ViolationKind::CursorAlignment;
    for (ViolationKind k : sum.lemmaKinds) {
      if (k != ViolationKind::CursorAlignment) {
        target = k;
        break;
      }
    }
    stillFails = [&, target](const Scenario& c) {
      const RunSummary r = summarizeRun(c, ruleset);
      return std::find(r.lemmaKinds.begin(), r.lemmaKinds.end(), target) != r.lemmaKinds.end();
    };
  }
  f.minimized = minimize ? minimizeScenario(s, stillFails) : s;
  Trace first, second;
  const RunSummary a = summarizeRun(f.minimized, ruleset, &first);
  summarizeRun(f.minimized, ruleset, &second);
  f.minimizedKinds = a.lemmaKinds;
  f.replayConfirmed = stillFails(f.minimized) && traceToString(first, true) == traceToString(second, true);
  return f;
}

}  // namespace

SearchReport exhaustiveSearch(const SearchSpec& spec) {
  SearchReport report;
  report.spec = spec;
  const std::vector<Scenario> scenarios = enumerateScenarios(spec);
  const unsigned workers = spec.workers ? spec.workers : workerCount();
  std::vector<RunSummary> sums(scenarios.size());
  parallelFor(scenarios.size(), workers, [&](std::size_t i) { sums[i] = summarizeRun(scenarios[i], spec.ruleset); });

  std::map<ViolationKind, std::size_t> counts;
  std::vector<std::size_t> toMinimize;
  std::size_t lemmaExamples = 0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const RunSummary& s = sums[i];
    ++report.runs;
    if (s.result == RunResult::Dispersed) {
      ++report.dispersed;
      report.maxBudgetFraction =
          std::max(report.maxBudgetFraction, static_cast<double>(s.roundsUsed) / static_cast<double>(roundBudget(scenarios[i])));
    }
    if (s.result == RunResult::Livelock) ++report.livelock;
    if (s.result == RunResult::BudgetExceeded) ++report.budgetExceeded;
    if (s.result == RunResult::Dispersed && !s.withinBudget) ++report.overRoundBudget;
    report.modelViolations += s.modelViolations;
    if (s.displacementOk) {
      ++report.displacementChecked;
      if (!*s.displacementOk) ++report.displacementFailed;
    }
    for (ViolationKind k : s.lemmaKinds) ++counts[k];
    const bool lemma = std::any_of(s.lemmaKinds.begin(), s.lemmaKinds.end(),
                                   [](ViolationKind k) { return k != ViolationKind::CursorAlignment; });
    if (failed(s)) {
      toMinimize.push_back(i);
    } else if (lemma) {
      ++report.lemmaOnlyRuns;
      if (lemmaExamples < spec.maxLemmaFindings) {
        ++lemmaExamples;
        toMinimize.push_back(i);
      }
    }
  }
  report.lemmaCounts.assign(counts.begin(), counts.end());
  report.findings.resize(toMinimize.size());
  parallelFor(toMinimize.size(), workers, [&](std::size_t j) {
    const std::size_t i = toMinimize[j];
    report.findings[j] = buildFinding(scenarios[i], sums[i], spec.ruleset, spec.minimize);
  });
  for (const Finding& f : report.findings) {
    if (f.failure && !f.explained()) ++report.unexplainedFailures;
  }
  return report;
}

std::string formatReport(const SearchReport& r) {
  std::ostringstream out;
  const SearchSpec& s = r.spec;
  out << "search n=" << s.nMin << ".." << s.nMax << " k=" << s.kMin << ".." << s.kMax << " L=" << s.lMin << ".."
      << s.lMax << " sources=" << (s.sources == SourceMode::Single ? "single" : "multi")
      << " ruleset=" << toString(s.ruleset) << "\n";
  const auto pct = [&](std::size_t x) { return r.runs ? 100.0 * static_cast<double>(x) / static_cast<double>(r.runs) : 0.0; };
  out << "runs " << r.runs << "\n";
  out << "  Dispersed      " << r.dispersed << " (" << pct(r.dispersed) << "%)\n";
  out << "  Livelock       " << r.livelock << " (" << pct(r.livelock) << "%)\n";
  out << "  BudgetExceeded " << r.budgetExceeded << " (" << pct(r.budgetExceeded) << "%)\n";
  out << "  dispersed over 19*8*(MaxSize+k) rounds: " << r.overRoundBudget << "\n";
  out << "  max rounds/budget over dispersed runs: " << r.maxBudgetFraction << "\n";
  out << "model violations " << r.modelViolations << "\n";
  if (r.displacementChecked) {
    out << "displacement bound: " << r.displacementChecked - r.displacementFailed << "/" << r.displacementChecked << " hold\n";
  }
  out << "lemma checks (runs with at least one finding):\n";
  for (auto k : {ViolationKind::UniqueLeader, ViolationKind::CrossChainColocation, ViolationKind::AdjacentActiveMerge,
                 ViolationKind::Alternation, ViolationKind::Distinguished, ViolationKind::StatusBudget,
                 ViolationKind::StatusBackEdge, ViolationKind::MergeCompletion, ViolationKind::CursorAlignment,
                 ViolationKind::LeaderMultiplicity, ViolationKind::PhaseDisplacement, ViolationKind::IdleRejoined}) {
    std::size_t c = 0;
    for (auto& [kind, count] : r.lemmaCounts) {
      if (kind == k) c = count;
    }
    out << "  (" << lemmaCode(k) << ") " << toString(k) << ": " << c << "\n";
  }
  std::size_t failures = 0;
  for (const Finding& f : r.findings) failures += f.failure;
  out << "failures " << failures << ", unexplained " << r.unexplainedFailures << "\n";
  out << "dispersed runs with lemma findings " << r.lemmaOnlyRuns << "\n";
  return out.str();
}

}  // namespace ringdisp
