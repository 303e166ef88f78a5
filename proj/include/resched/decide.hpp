#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resched/protocol.hpp"
#include "resched/risk.hpp"

namespace resched {

/// J = alpha . C + beta * penalty + (risk on ? W (w1 R1 + w2 R2) : 0).
/// Metrics: "completion" (end of the last event), "events" (event count).
struct Objective {
  std::vector<double> alpha{1.0};
  std::vector<std::string> metrics{"completion"};
  double beta = 1.0;
  RiskWeights weights;
  bool risk_enabled = false;

  /// Throws ConfigError on mismatched sizes, negative weights or unknown
  /// metric names.
  void check() const;
};

struct Evaluated {
  CandidateSchedule candidate;
  RiskReport risk;
  double j = 0.0;
};

struct Decision {
  std::optional<Evaluated> chosen;
  double j_value = 0.0;
  std::vector<Evaluated> all_evaluated;
  bool escalated = true;
};

double evaluate(const CandidateSchedule& candidate, const Objective& objective,
                const RiskReport* risk);

/// Strict ordering used by select: J, completion, event count, resources.
bool better(const Evaluated& a, const Evaluated& b);

/// Argmin of J with deterministic tie-breaks; escalated when empty.
Decision select(std::vector<Evaluated> evaluated);

/// Every candidate over every eligible host and minimal transport legs,
/// one per distinct resource tuple.
std::vector<CandidateSchedule> centralized_candidates(const RepairEnv& env,
                                                      const RepairRequest& req);

/// Messages the central controller exchanges for one span: one query and
/// reply per resource and span event, r * |s_d| in total.
std::size_t centralized_messages(const RepairEnv& env, const RepairRequest& req, MessageBus& bus);

enum class EscalationReason { EmptyCluster, NoCapacity, CentralizedEmpty };

std::string to_string(EscalationReason r);

struct EscalationRecord {
  Tick tick = 0;
  ResourceId resource;
  ProductId product = 0;
  std::string event;
  EscalationReason reason = EscalationReason::NoCapacity;
};

EscalationRecord escalate(const RepairRequest& req, Tick tick, EscalationReason reason);

}  // namespace resched
