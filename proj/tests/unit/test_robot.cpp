#include <doctest.h>

#include "ringdisp/errors.hpp"
#include "ringdisp/robot.hpp"

using namespace ringdisp;

TEST_CASE("bitAt reads zero-padded labels from the least significant end") {
  MaxSize three{3};
  CHECK(bitAt(Label{5}, 1, three) == 1);
  CHECK(bitAt(Label{5}, 2, three) == 0);
  CHECK(bitAt(Label{5}, 3, three) == 1);
  CHECK(bitAt(Label{1}, 3, three) == 0);
  CHECK_THROWS_AS(bitAt(Label{1}, 0, three), ContractViolation);
  CHECK_THROWS_AS(bitAt(Label{1}, 4, three), ContractViolation);
}

TEST_CASE("distinct labels differ at some padded bit") {
  for (std::uint64_t L = 1; L < 40; ++L) {
    auto m = MaxSize::forMaxLabel(L);
    for (std::uint64_t a = 0; a <= L; ++a)
      for (std::uint64_t b = a + 1; b <= L; ++b) {
        bool differs = false;
        for (std::uint32_t i = 1; i <= m.bits; ++i) differs |= bitAt(Label{a}, i, m) != bitAt(Label{b}, i, m);
        CHECK(differs);
      }
  }
}

TEST_CASE("MaxSize is the bit width of L") {
  CHECK(MaxSize::forMaxLabel(0).bits == 1);
  CHECK(MaxSize::forMaxLabel(1).bits == 1);
  CHECK(MaxSize::forMaxLabel(3).bits == 2);
  CHECK(MaxSize::forMaxLabel(7).bits == 3);
  CHECK(MaxSize::forMaxLabel(8).bits == 4);
  CHECK(MaxSize::forMaxLabel(1023).bits == 10);
}

TEST_CASE("status names round-trip") {
  for (auto s : {Status::LeaderElection, Status::ActiveMerge, Status::ActiveDisperse, Status::Passive, Status::Wait,
                 Status::Jump, Status::Idle})
    CHECK((statusFromString(toString(s)) == s));
  CHECK_FALSE((statusFromString("sleeping")));
}

TEST_CASE("status graph has no way back") {
  CHECK((isAllowedTransition(Status::LeaderElection, Status::ActiveMerge)));
  CHECK((isAllowedTransition(Status::ActiveMerge, Status::ActiveDisperse)));
  CHECK((isAllowedTransition(Status::Passive, Status::Jump)));
  CHECK((isAllowedTransition(Status::Jump, Status::Wait)));
  CHECK((isAllowedTransition(Status::ActiveDisperse, Status::Idle)));
  CHECK_FALSE((isAllowedTransition(Status::ActiveDisperse, Status::ActiveMerge)));
  CHECK_FALSE((isAllowedTransition(Status::ActiveDisperse, Status::LeaderElection)));
  CHECK_FALSE((isAllowedTransition(Status::Idle, Status::Passive)));
  CHECK_FALSE((isAllowedTransition(Status::LeaderElection, Status::ActiveDisperse)));
}

TEST_CASE("applyPendingStatus commits the deferred status") {
  RobotState s = initialRobotState(Label{3});
  s.status = Status::ActiveMerge;
  s.pendingStatus = Status::ActiveDisperse;
  s.moveVar = 2;
  s.proceed = 2;
  s.start = true;
  s.leader = true;
  Observation o;
  s.obsLog.push(o);
  auto t = applyPendingStatus(s);
  CHECK((t.status == Status::ActiveDisperse));
  CHECK_FALSE(t.pendingStatus);
  CHECK(t.moveVar == 0);
  CHECK(t.obsLog.empty());
  CHECK(t.proceed == 2);
  CHECK(t.start);
  CHECK(t.leader);
}

TEST_CASE("applyPendingStatus without a pending status only resets per-phase state") {
  RobotState s = initialRobotState(Label{3});
  s.status = Status::Passive;
  s.moveVar = 1;
  auto t = applyPendingStatus(s);
  CHECK((t.status == Status::Passive));
  CHECK(t.moveVar == 0);
  s.moveVar = 0;
  CHECK(t == s);
}

TEST_CASE("applyPendingStatus refuses a back-edge") {
  RobotState s = initialRobotState(Label{3});
  s.status = Status::Idle;
  s.pendingStatus = Status::LeaderElection;
  CHECK_THROWS_AS(applyPendingStatus(s), InvariantViolation);
}
