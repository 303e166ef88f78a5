#include <doctest.h>

#include "support/insertion_oracle.hpp"

using namespace resched;

TEST_CASE("earliest_start equals the tick-scan oracle") {
  std::mt19937_64 rng(20240611);
  int accepted = 0, shifted = 0, rejected = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const auto in = oracle::random_case(rng);
    const auto idle = idle_intervals(in.busy, in.horizon, in.from);
    const auto got = try_earliest_start(idle, in.busy, in.t, in.delta, in.dur, in.horizon);
    const auto want = oracle::scan(in.busy, in.t, in.delta, in.dur, in.horizon, in.from);
    CAPTURE(trial);
    CAPTURE(in.delta);
    CAPTURE(in.horizon);
    CAPTURE(in.from);
    CAPTURE(in.t);
    CAPTURE(in.dur);
    REQUIRE(got.has_value() == want.has_value());
    if (!got) {
      ++rejected;
      continue;
    }
    ++accepted;
    REQUIRE(got->start == want->start);
    REQUIRE(got->shift.has_value() == want->shifted.has_value());
    if (got->shift) {
      ++shifted;
      REQUIRE(got->shift->index == *want->shifted);
      REQUIRE(got->shift->to == want->shifted_to);
      REQUIRE(got->shift->from == in.busy[got->shift->index].start);
    }
    REQUIRE(got->t_max == want->t_max);

    REQUIRE(got->start >= in.t);
    if (!is_infinite(got->t_max)) REQUIRE(got->start <= got->t_max);
  }
  // The generator must exercise every branch.
  CHECK(accepted > 1000);
  CHECK(shifted > 100);
  CHECK(rejected > 100);
}
