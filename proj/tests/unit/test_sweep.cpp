#include <doctest.h>

#include <cmath>

#include "ringdisp/sweep.hpp"

using namespace ringdisp;

TEST_CASE("empty sweep writes only the header") {
  SweepSpec spec;
  spec.from = 5;
  spec.to = 4;
  CHECK(sweepValues(spec).empty());
  auto rows = runSweep(spec);
  CHECK(rows.empty());
  CHECK(sweepCsv(rows) == "n,k,L,seed,ruleset,outcome,rounds,phases\n");
  CHECK_FALSE(fitRounds(rows));
}

TEST_CASE("sweep values") {
  SweepSpec spec;
  spec.from = 2;
  spec.to = 8;
  spec.step = 3;
  CHECK(sweepValues(spec) == std::vector<std::uint64_t>{2, 5, 8});
}

TEST_CASE("sweep rows are deterministic and in order") {
  SweepSpec spec;
  spec.vary = SweepAxis::K;
  spec.from = 1;
  spec.to = 3;
  spec.seeds = 2;
  spec.n = 8;
  spec.maxLabel = 7;
  auto a = runSweep(spec);
  REQUIRE(a.size() == 6);
  CHECK(a[0].k == 1);
  CHECK(a[1].seed == 1);
  CHECK(a[5].k == 3);
  CHECK(sweepCsv(a) == sweepCsv(runSweep(spec)));
}

TEST_CASE("infeasible points become invalid rows") {
  SweepSpec spec;
  spec.vary = SweepAxis::L;
  spec.from = 1;
  spec.to = 2;
  spec.k = 4;
  spec.n = 8;
  auto rows = runSweep(spec);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].outcome == "invalid");
  CHECK_FALSE(rows[0].error.empty());
  CHECK(rows[1].outcome == "invalid");
}

TEST_CASE("fit recovers an exact plane") {
  std::vector<SweepRow> rows;
  for (std::uint32_t k = 1; k <= 6; ++k)
    for (std::uint64_t bits = 1; bits <= 6; ++bits) {
      SweepRow r;
      r.k = k;
      r.maxLabel = (1ULL << bits) - 1;
      r.outcome = "Dispersed";
      r.rounds = 19 * (3 * bits + 5 * k + 7);
      rows.push_back(r);
    }
  rows.push_back(SweepRow{8, 2, 3, 0, Ruleset::Repaired, "Livelock", 99999, 0, ""});
  auto fit = fitRounds(rows);
  REQUIRE(fit);
  CHECK(fit->samples == 36);
  CHECK(fit->a == doctest::Approx(57.0));
  CHECK(fit->b == doctest::Approx(95.0));
  CHECK(fit->c == doctest::Approx(133.0));
  CHECK(fit->r2 == doctest::Approx(1.0));
}

TEST_CASE("a constant column gets a zero coefficient") {
  std::vector<SweepRow> rows;
  for (std::uint64_t bits = 1; bits <= 5; ++bits) {
    SweepRow r;
    r.k = 4;
    r.maxLabel = (1ULL << bits) - 1;
    r.outcome = "Dispersed";
    r.rounds = 10 * bits + 3;
    rows.push_back(r);
  }
  auto fit = fitRounds(rows);
  REQUIRE(fit);
  CHECK(fit->b == 0.0);
  CHECK(fit->a == doctest::Approx(10.0));
  CHECK(fit->c == doctest::Approx(3.0));
}
