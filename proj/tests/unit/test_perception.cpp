#include <doctest.h>

#include "ringdisp/errors.hpp"
#include "ringdisp/perception.hpp"

using namespace ringdisp;

TEST_CASE("observe reports net changes for robots that stayed") {
  auto up = observe(3, 2u, false, 4);
  CHECK(up.increase);
  CHECK_FALSE(up.decrease);
  CHECK_FALSE(up.alone);
  CHECK(up.roundInPhase == 4);

  // one arrival and one departure cancel out
  auto same = observe(3, 3u, false, 4);
  CHECK_FALSE(same.increase);
  CHECK_FALSE(same.decrease);

  auto down = observe(1, 2u, false, 2);
  CHECK(down.decrease);
  CHECK(down.alone);
}

TEST_CASE("observe gives no flags after a move or before the first round") {
  auto moved = observe(3, 1u, true, 5);
  CHECK_FALSE(moved.increase);
  CHECK_FALSE(moved.decrease);
  auto first = observe(1, std::nullopt, false, 1);
  CHECK(first.alone);
  CHECK_FALSE(first.increase);
}

TEST_CASE("observation log keeps round order") {
  ObservationLog log;
  CHECK(log.empty());
  for (std::uint32_t r = 1; r <= 5; ++r) log.push(observe(r, r - 1, false, r));
  CHECK(log.size() == 5);
  CHECK(log.at(3).roundInPhase == 3);
  CHECK(log.at(3).increase);
  CHECK_THROWS_AS(log.at(6), ContractViolation);
  log.clear();
  CHECK(log.empty());
}

namespace {
ObservationLog logWithIncreaseAt(std::uint32_t round, std::uint32_t upTo) {
  ObservationLog log;
  for (std::uint32_t r = 1; r <= upTo; ++r) {
    Observation o;
    o.roundInPhase = r;
    o.increase = r == round;
    log.push(o);
  }
  return log;
}
}  // namespace

TEST_CASE("latchWindow") {
  CHECK(latchWindow(logWithIncreaseAt(10, 12), 10, 12, Flag::Increase));
  CHECK_FALSE(latchWindow(logWithIncreaseAt(10, 12), 10, 12, Flag::Decrease));
  CHECK_FALSE(latchWindow(logWithIncreaseAt(0, 12), 10, 12, Flag::Increase));
  CHECK_FALSE(latchWindow(logWithIncreaseAt(7, 12), 10, 12, Flag::Increase));
  // window past what has been observed, or reversed
  CHECK_THROWS_AS(latchWindow(logWithIncreaseAt(7, 11), 10, 12, Flag::Increase), ContractViolation);
  CHECK_THROWS_AS(latchWindow(logWithIncreaseAt(7, 12), 12, 10, Flag::Increase), ContractViolation);
}
