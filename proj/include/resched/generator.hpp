#pragma once

#include "resched/plan.hpp"
#include "resched/scenario.hpp"

namespace resched {

struct InitialSchedule {
  Plan plan;
  Tick makespan = 0;
  double utilization = 0.0;  // busy time over (resources x makespan)
  double machine_utilization = 0.0;
};

/// List scheduling in release order. Each product's route is laid out as
/// one unbroken chain (transports, then the transform, ...) placed at the
/// earliest start at or after its release where every entry fits its
/// resource. Hosts are tried in order of assigned load. Throws
/// InfeasibleScenario when a route step has no host or a leg no robot path.
InitialSchedule generate_initial_schedule(const Scenario& scenario, const Registry& registry,
                                          int max_hops = 2);

}  // namespace resched
