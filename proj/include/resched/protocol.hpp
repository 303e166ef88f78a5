#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "resched/bus.hpp"
#include "resched/capability.hpp"
#include "resched/plan.hpp"

namespace resched {

struct PriorityWeights {
  double w_s = 1.0;
  double w_d = 1.0;
};

struct DisruptionReport {
  ResourceId resource;
  Tick at = 0;
  std::vector<ScheduledEvent> affected;  // E_d, highest priority first
};

/// Entries of `rs` ending after `now`, sorted by descending
/// G = w_s/(start+1) + w_d/(due+1); ties by (start, product).
DisruptionReport affected_events(const ResourceSchedule& rs, Tick now, PriorityWeights w,
                                 const std::map<ProductId, Tick>& due);

struct ReplacementSpan {
  std::vector<ScheduledEvent> events;  // s_d
  std::size_t first = 0;               // index of s_d in the product schedule
  ProductState x_prior;
  ProductState x_post;
};

/// Shortest run around e_q that must be replaced: transports into and out
/// of the disrupted location together with e_q. A transport e_q is its own
/// span. Throws EventNotFound.
ReplacementSpan replacement_span(const ScheduledEvent& e_q, const ProductSchedule& ps,
                                 const std::string& disrupted_loc);

struct RepairRequest {
  EventSpec affected_event;
  ResourceId disrupted;
  Requirements requirements;
  ProductState x_prior;
  ProductState x_post;
  ProductId product = 0;
  Tick requested_time = 0;
  std::vector<EventSpec> span;      // s_d events
  std::vector<EntryId> span_uids;   // their plan entries
};

struct PlannedEvent {
  EventSpec event;
  ResourceId resource;
  Tick start = 0;
  Tick end = 0;
};

struct ShiftRecord {
  EntryId uid = 0;
  Tick from = 0;
  Tick to = 0;
};

/// What the delay risk of one inserted event is computed from.
struct SlackTerm {
  ResourceId resource;
  Tick start = 0;
  Tick t_max = kInfinite;
  Tick bound = kInfinite;
  Tick posterior_duration = 0;
  Tick own_duration = 0;
  Tick delta = 0;
};

struct CandidateSchedule {
  std::vector<PlannedEvent> events;  // s_new
  double penalty = 0.0;
  std::vector<ShiftRecord> shifts;
  std::vector<SlackTerm> slack_terms;

  Tick completion() const { return events.empty() ? 0 : events.back().end; }
  std::vector<ResourceId> resources() const;
  std::vector<EventSpec> specs() const;
};

/// Everything a repair reads, plus the plan it writes into.
struct RepairEnv {
  Plan& plan;
  const Registry& registry;
  const std::map<ResourceId, ResourceStatus>& status;
  Tick delta = 10;
  Tick now = 0;
  Tick horizon = kInfinite;
  int max_hops = 2;
  std::map<ProductId, Requirements> requirements;

  bool usable(const ResourceId& id) const;
  Requirements requirements_for(ProductId p) const;
  Tick gap(const ResourceId& id) const { return plan.is_machine(id) ? delta : 0; }
};

/// One transport hop.
struct Hop {
  ResourceId robot;
  EventSpec event;
};
using Path = std::vector<Hop>;

/// Minimal-hop simple robot paths from one location to another, at most
/// `max_hops` long, using robots accepted by `usable`. Coinciding
/// locations give a single empty path.
std::vector<Path> transport_paths(const std::string& from, const std::string& to,
                                  const Registry& registry,
                                  const std::function<bool(const ResourceId&)>& usable,
                                  int max_hops);

/// Event slot of a candidate before timing.
struct Slot {
  EventSpec event;
  ResourceId resource;
};

/// Event slots for hosting the span's transforms at `host`, reached by
/// `in` and left by `out`.
std::vector<Slot> host_slots(const RepairRequest& req, const ResourceId& host,
                             const std::string& host_loc, const Path& in, const Path& out);

/// Times the slots one after another with the insertion function. Each
/// start is at least the previous end; slots on `held` start at
/// `not_before` at the earliest. Nullopt when some slot admits no insertion.
std::optional<CandidateSchedule> time_slots(const RepairEnv& env, const RepairRequest& req,
                                            const std::vector<Slot>& slots,
                                            Tick not_before = 0, const ResourceId& held = {});

/// Keeps the earliest-completing candidate per resource tuple.
std::vector<CandidateSchedule> distinct_by_resources(std::vector<CandidateSchedule> all);

/// Sends one bid request per cluster member. Throws EmptyCluster.
std::size_t broadcast_request(const RepairRequest& req, const std::set<ResourceId>& cluster,
                              MessageBus& bus, Tick tick);

struct BidResult {
  std::vector<CandidateSchedule> candidates;
  std::size_t messages = 0;
};

/// A bidder's candidate schedules for `req`, with the collaborative and
/// propagation messages it exchanged.
BidResult generate_candidate(const CapabilityModel& bidder, const RepairRequest& req,
                             const RepairEnv& env, MessageBus& bus);

/// Removal notices to the owners of span entries other than the
/// disrupted resource's.
std::size_t notify_sequential_removals(const ReplacementSpan& span, const ResourceId& disrupted,
                                       MessageBus& bus, Tick tick);

/// Builds the request for the span around e_q. The requested time is when
/// the product is available in x_prior, never before env.now.
RepairRequest make_request(const RepairEnv& env, const ScheduledEvent& e_q,
                           const ReplacementSpan& span, const ProductSchedule& remaining);

/// Replaces the span in the plan with the candidate, applies its shift and
/// right-shifts whatever now starts too early. Returns the new entries.
std::vector<EntryId> commit(RepairEnv& env, const RepairRequest& req,
                            const CandidateSchedule& cand);

}  // namespace resched
