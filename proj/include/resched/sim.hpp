#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "resched/generator.hpp"
#include "resched/repair.hpp"
#include "resched/scenario.hpp"

namespace resched {

struct SimConfig {
  Mode mode = Mode::Distributed;
  bool risk_enabled = true;
  int max_hops = 2;
  int n_samples = 1000;
  RiskWeights weights;
  PriorityWeights priority;
  double beta = 1.0;
  bool shadow_centralized = false;
  bool validate_repairs = false;
  bool trace_messages = false;

  /// Throws ConfigError on out-of-range values.
  void check() const;
};

struct TrialMetrics {
  std::uint64_t seed = 0;
  Mode mode = Mode::Distributed;
  bool risk_enabled = true;
  std::size_t products = 0;
  std::size_t completed = 0;
  std::size_t damaged = 0;
  std::size_t in_flight = 0;
  std::size_t broken_machines = 0;
  std::size_t disruptions = 0;
  std::size_t repairs = 0;
  std::size_t rescheduled_processes = 0;
  std::size_t total_processes = 0;
  std::size_t communications = 0;
  std::size_t escalations = 0;
  std::size_t deferred = 0;
  double mean_cycle_time = 0.0;
  Tick max_cycle_time = 0;
  Tick makespan = 0;
  double peak_risk = 0.0;
  double avg_risk = 0.0;
  double utilization = 0.0;
  bool horizon_exceeded = false;

  double wall_ms = 0.0;                     // time spent rescheduling
  std::map<ProductId, Tick> cycle_times;    // exited products only
  std::vector<RepairRecord> repair_log;
  std::vector<std::string> violations;      // filled when validating repairs
  std::string message_trace;
};

struct MachineRuntime {
  ResourceStatus status;
  double base_hazard = 0.0;
};

enum class CheckContext { OperationStart, IdleCheckpoint };

/// min(max_p, base * scale * o_c / o_n) at an operation start; that value
/// times the idle factor at an idle checkpoint.
double breakdown_chance(const MachineRuntime& m, CheckContext ctx, const StochasticParams& p);
bool sample_breakdown(const MachineRuntime& m, CheckContext ctx, const StochasticParams& p,
                      std::mt19937_64& rng);
Tick sample_repair_time(const StochasticParams& p, std::mt19937_64& rng);

enum class SimEventKind { Start, Finish, Exit, Breakdown, Repair, Damage };

std::string to_string(SimEventKind k);

struct SimEvent {
  Tick tick = 0;
  SimEventKind kind = SimEventKind::Start;
  ResourceId resource;
  ProductId product = 0;
};

/// One trial: the plan being executed, the resource runtimes and the
/// collected metrics. Machine parameters come from per-resource streams of
/// the trial seed. Every later draw has its own engine keyed by what it
/// decides (machine, repair epoch and operation count for a breakdown;
/// product and operation index for a duration), so two trials with the
/// same seed see the same draws for the same situation.
class World {
 public:
  World(const Scenario& scenario, const InitialSchedule& initial, const SimConfig& config,
        std::uint64_t seed);

  /// Advances one tick and returns what happened in it.
  std::vector<SimEvent> step();
  bool finished() const;
  Tick now() const { return now_; }

  /// Breaks `machine` at tick `at` regardless of its hazard.
  void force_breakdown(const ResourceId& machine, Tick at);

  const Plan& plan() const { return plan_; }
  const std::map<ResourceId, MachineRuntime>& machines() const { return machines_; }
  TrialMetrics metrics() const;

 private:
  struct Running {
    EntryId uid = 0;
    Tick until = 0;
  };

  void finish_operations(std::vector<SimEvent>& out);
  void repair_machines(std::vector<SimEvent>& out);
  void idle_checkpoints(std::vector<SimEvent>& out);
  void dispatch(std::vector<SimEvent>& out);
  void break_down(const ResourceId& id, std::vector<SimEvent>& out);
  void damage(ProductId p, std::vector<SimEvent>& out);
  std::map<ResourceId, ResourceStatus> statuses() const;
  std::mt19937_64 stream(std::uint32_t tag, std::uint32_t a, std::uint32_t b = 0,
                         std::uint32_t c = 0) const;

  const Scenario& scenario_;
  SimConfig config_;
  Registry registry_;
  Plan plan_;
  std::uint64_t seed_;
  Tick now_ = 0;
  double utilization_ = 0.0;

  std::map<ResourceId, MachineRuntime> machines_;
  std::map<ResourceId, std::uint32_t> index_;
  std::map<ResourceId, std::uint32_t> epoch_;
  std::map<ProductId, std::uint32_t> ops_;
  std::map<ResourceId, Running> running_;
  std::map<Tick, std::vector<ResourceId>> forced_;
  std::map<ProductId, Tick> release_;
  std::map<ProductId, Tick> due_;
  std::map<ProductId, Requirements> requirements_;
  std::map<ProductId, Tick> exits_;
  std::set<ProductId> damaged_;
  std::set<ProductId> dropped_;
  std::size_t total_processes_ = 0;

  MessageBus bus_;
  std::size_t broken_ = 0;
  std::size_t disruptions_ = 0;
  std::size_t communications_ = 0;
  std::size_t rescheduled_ = 0;
  std::size_t escalations_ = 0;
  double wall_ms_ = 0.0;
  std::vector<RepairRecord> log_;
  std::vector<std::string> violations_;
};

/// Runs until every product has left or been damaged, or the horizon.
TrialMetrics run_trial(const Scenario& scenario, const InitialSchedule& initial,
                       const SimConfig& config, std::uint64_t seed);
TrialMetrics run_trial(const Scenario& scenario, const SimConfig& config, std::uint64_t seed);

/// Applies a --set key=value override. Throws ConfigError on unknown keys
/// or out-of-range values.
void apply_override(Scenario& scenario, SimConfig& config, const std::string& key,
                    const std::string& value);

}  // namespace resched
