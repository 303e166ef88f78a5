#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "resched/decide.hpp"

namespace resched {

enum class Mode { Centralized, Distributed };

std::string to_string(Mode m);
/// Throws ConfigError for anything but "centralized" or "distributed".
Mode parse_mode(const std::string& s);

struct RepairSettings {
  Mode mode = Mode::Distributed;
  Objective objective;
  UncertaintyModel uncertainty;
  PriorityWeights priority;
  std::uint64_t seed = 0;
  bool shadow_centralized = false;  // also price the centralized optimum
};

struct RepairRecord {
  Tick tick = 0;
  ResourceId resource;
  ProductId product = 0;
  std::string event;
  std::size_t span_length = 0;
  std::size_t transforms = 0;
  std::size_t candidates = 0;
  std::size_t messages = 0;
  double j = 0.0;
  double risk = 0.0;  // w1 R1 + w2 R2 of the chosen schedule
  std::string outcome;  // distributed, centralized, deferred or dropped
  std::optional<double> central_j;
  RepairRequest request;
  CandidateSchedule chosen;
  std::vector<CandidateSchedule> offered;  // every candidate considered
};

struct DisruptionOutcome {
  std::size_t affected = 0;
  std::vector<RepairRecord> repairs;
  std::vector<EscalationRecord> escalations;
  std::size_t messages = 0;
  std::size_t rescheduled_processes = 0;
  double wall_ms = 0.0;
};

/// Seed of the risk sampler for one candidate; equal candidates get equal
/// seeds whichever mode produced them.
std::uint64_t candidate_seed(std::uint64_t base, Tick now, const CandidateSchedule& c);

std::vector<Evaluated> evaluate_all(const RepairEnv& env, std::vector<CandidateSchedule> cands,
                                    const RepairSettings& settings);

/// Repairs every affected entry of a resource that went down at env.now and
/// stays down until `down_until`. Distributed mode escalates to the
/// centralized search; when both fail the span waits for the repair.
DisruptionOutcome handle_disruption(RepairEnv& env, const ResourceId& disrupted, Tick down_until,
                                    const std::map<ProductId, Tick>& due,
                                    const RepairSettings& settings, MessageBus& bus);

}  // namespace resched
