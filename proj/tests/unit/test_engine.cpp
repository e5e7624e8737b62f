#include <doctest.h>

#include "ringdisp/engine.hpp"
#include "ringdisp/errors.hpp"
#include "ringdisp/scenario.hpp"
#include "ringdisp/trace_io.hpp"

using namespace ringdisp;

namespace {
Scenario rotated(Scenario s, std::uint32_t by) {
  for (auto& r : s.robots) r.node = (r.node + by) % s.n;
  return s;
}
}  // namespace

TEST_CASE("stepRound: stayers keep the placement") {
  Scenario sc{6, 7, {{Label{2}, 0}, {Label{4}, 1}}};
  auto c = Configuration::fromScenario(sc);
  // both robots are alone, so round 1 is a self-election with no moves
  auto [next, rec] = stepRound(c, Ruleset::Repaired);
  CHECK(next.placement == c.placement);
  CHECK(next.globalRound == 1);
  CHECK(next.roundInPhase == 2);
  CHECK(rec.globalRound == 0);
  CHECK(rec.occupancy == c.placement.occupancy());
}

TEST_CASE("stepRound: round 1 on {1,2} moves only robot 1") {
  Scenario sc{4, 3, {{Label{1}, 0}, {Label{2}, 0}}};
  auto [next, rec] = stepRound(Configuration::fromScenario(sc), Ruleset::Repaired);
  CHECK(next.placement.nodeOf(0) == 1);
  CHECK(next.placement.nodeOf(1) == 0);
  CHECK(rec.robots[0].port == Port::One);
  CHECK_FALSE(rec.robots[1].port);
  CHECK(next.robots[0].obsLog.size() == 1);
}

TEST_CASE("stepRound: round 19 commits pending statuses") {
  Scenario sc{5, 0, {{Label{0}, 0}}};
  auto c = Configuration::fromScenario(sc);
  for (int r = 0; r < 18; ++r) c = stepRound(c, Ruleset::Repaired).first;
  CHECK(c.roundInPhase == 19);
  CHECK((c.robots[0].pendingStatus == Status::ActiveMerge));
  CHECK((c.robots[0].status == Status::LeaderElection));
  c = stepRound(c, Ruleset::Repaired).first;
  CHECK(c.phase == 2);
  CHECK(c.roundInPhase == 1);
  CHECK((c.robots[0].status == Status::ActiveMerge));
  CHECK_FALSE(c.robots[0].pendingStatus);
  CHECK(c.robots[0].obsLog.empty());
}

TEST_CASE("a lone robot disperses quickly") {
  for (std::uint32_t n : {3u, 5u, 8u}) {
    Scenario sc{n, 1, {{Label{1}, n - 1}}};
    auto out = run(sc, Ruleset::Repaired);
    CHECK((out.result == RunResult::Dispersed));
    CHECK(out.roundsUsed < 19u * (sc.maxSize().bits + 3));
    CHECK(out.trace->records.front().robots[0].obs.alone);
    CHECK(out.trace->records.at(1).robots[0].leader);
  }
}

TEST_CASE("{1,2} on one node disperses within the bound") {
  Scenario sc{4, 3, {{Label{1}, 0}, {Label{2}, 0}}};
  auto out = run(sc, Ruleset::Repaired);
  CHECK((out.result == RunResult::Dispersed));
  CHECK(out.finalConfiguration.placement.allDistinct());
  CHECK(out.roundsUsed <= 19u * (2 * sc.maxSize().bits + 2 * 2 + 4));

  // hand-traced on n = 5
  Scenario five{5, 3, {{Label{1}, 0}, {Label{2}, 0}}};
  auto o5 = run(five, Ruleset::Repaired);
  CHECK((o5.result == RunResult::Dispersed));
  CHECK(o5.roundsUsed == 95);
  CHECK(o5.phasesUsed == 5);
  CHECK(o5.finalConfiguration.placement.nodeOf(0) == 1);
  CHECK(o5.finalConfiguration.placement.nodeOf(1) == 0);
}

TEST_CASE("two-group chain") {
  auto sc = genChain({2, 2}, 5, 8, 3);
  SUBCASE("literal merge translates the chain forever") {
    auto out = run(sc, Ruleset::Literal);
    CHECK((out.result == RunResult::Livelock));
    CHECK(out.phasesUsed == 3);
  }
  SUBCASE("repaired merge gathers everybody, then disperses") {
    auto out = run(sc, Ruleset::Repaired);
    CHECK((out.result == RunResult::Dispersed));
    CHECK(out.phasesUsed == 10);
    CHECK(out.roundsUsed == 190);
    // end of phase 4: all four on one node, about to disperse
    const auto& last = out.trace->records.at(4 * 19 - 1);
    std::uint32_t maxCount = 0;
    for (auto c : last.occupancy) maxCount = std::max(maxCount, c);
    CHECK(maxCount == 4);
  }
}

TEST_CASE("budget exhaustion is reported") {
  Scenario sc{5, 3, {{Label{1}, 0}, {Label{2}, 0}}};
  RunOptions o;
  o.maxPhases = 2;
  auto out = run(sc, Ruleset::Repaired, o);
  CHECK((out.result == RunResult::BudgetExceeded));
  CHECK(out.phasesUsed == 2);
  CHECK((out.trace->footer->result == RunResult::BudgetExceeded));
}

TEST_CASE("runs are deterministic") {
  auto sc = genMultiSource(9, 5, 15, 4, 11);
  auto a = run(sc, Ruleset::Repaired);
  auto b = run(sc, Ruleset::Repaired);
  CHECK(traceToString(*a.trace, true) == traceToString(*b.trace, true));
}

TEST_CASE("snapshot keys ignore rotation but not state") {
  Scenario sc{7, 7, {{Label{3}, 0}, {Label{5}, 0}, {Label{6}, 2}}};
  auto a = Configuration::fromScenario(sc);
  auto b = Configuration::fromScenario(rotated(sc, 2));
  CHECK(snapshotKey(a) == snapshotKey(b));
  auto c = a;
  c.robots[1].proceed = 1;
  CHECK_FALSE(snapshotKey(a) == snapshotKey(c));
  // mirror images are different configurations on an oriented ring
  Scenario mirror{7, 7, {{Label{3}, 0}, {Label{5}, 0}, {Label{6}, 5}}};
  CHECK_FALSE(snapshotKey(a) == snapshotKey(Configuration::fromScenario(mirror)));
}

TEST_CASE("run refuses a mid-phase configuration") {
  Scenario sc{5, 3, {{Label{1}, 0}}};
  auto c = stepRound(Configuration::fromScenario(sc), Ruleset::Repaired).first;
  CHECK_THROWS_AS(run(c, Ruleset::Repaired), ConfigurationError);
  CHECK(defaultPhaseBudget(MaxSize{3}, 2) == 56);
}
