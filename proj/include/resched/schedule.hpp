#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resched/types.hpp"

namespace resched {

/// Where a product is and what has been done to it.
struct ProductState {
  std::string location;
  std::string composition;

  bool operator==(const ProductState&) const = default;
  auto operator<=>(const ProductState&) const = default;
};

std::string to_string(const ProductState& s);

enum class EventKind { Transport, Transform };

/// A discrete event that changes exactly one component of a product state.
///
/// Transport: `from`/`to` are locations, composition unchanged.
/// Transform: `from`/`to` are compositions, performed at `location`.
/// `id` is the capability name shared by every resource able to perform
/// the event ("P3", "move:M01>M07").
struct EventSpec {
  std::string id;
  EventKind kind = EventKind::Transform;
  std::string from;
  std::string to;
  std::string location;

  static EventSpec transport(std::string from_loc, std::string to_loc);
  static EventSpec transform(std::string process, std::string at,
                             std::string pre, std::string post);

  bool operator==(const EventSpec&) const = default;
};

std::string transport_id(const std::string& from, const std::string& to);

/// One event bound to a product, a resource and a time span.
struct ScheduledEvent {
  EntryId uid = 0;
  EventSpec event;
  ProductId product = 0;
  ResourceId resource;
  Tick start = 0;
  Tick end = 0;

  Tick duration() const { return end - start; }
};

struct ResourceSchedule {
  ResourceId resource;
  bool machine = true;  // the delta gap applies to machine schedules only
  std::vector<ScheduledEvent> entries;
};

struct ProductSchedule {
  ProductId product = 0;
  ProductState initial;
  Tick ready = 0;  // tick from which `initial` holds
  std::vector<ScheduledEvent> entries;

  /// x_0 .. x_f induced by the entries; throws InapplicableEvent.
  std::vector<ProductState> states() const;
};

struct IdleInterval {
  Tick lo = 0;
  Tick hi = 0;
  bool operator==(const IdleInterval&) const = default;
};

/// A scheduled busy span as seen by the insertion function. `latest_end`
/// bounds how far the span may be pushed later (its own end when it cannot
/// move at all).
struct BusySpan {
  Tick start = 0;
  Tick end = 0;
  Tick latest_end = kInfinite;
};

struct SpanShift {
  std::size_t index = 0;  // into the busy-span list given to earliest_start
  Tick from = 0;
  Tick to = 0;
};

struct Insertion {
  Tick start = 0;
  std::optional<SpanShift> shift;
  Tick t_max = kInfinite;
  // Terms t_max was built from; the risk model resamples the durations.
  Tick bound = kInfinite;
  Tick posterior_duration = 0;
};

ProductState apply_transition(const ProductState& state, const EventSpec& event);

ProductState apply_sequence(const ProductState& state,
                            std::span<const EventSpec> seq);

/// Complement of the busy spans within [from, horizon]. Touching or
/// overlapping spans are merged.
std::vector<IdleInterval> idle_intervals(std::span<const BusySpan> busy,
                                         Tick horizon, Tick from);
std::vector<IdleInterval> idle_intervals(const ResourceSchedule& rs,
                                         Tick horizon, Tick from);

/// Earliest start for a new event of length `dur` requested at `t`,
/// allowing at most one posterior span to be pushed later.
///
/// Within each idle window [lo, hi] followed by span B (starting at hi)
/// and then C, the latest admissible start is
///   t_max = min(C.start - delta, B.latest_end) - |B| - delta - dur
/// where C.start falls back to the horizon and t_max is infinite when the
/// window has no posterior span. The result is max(t, lo + delta) in the
/// first window where that value is at most both the window end and t_max.
std::optional<Insertion> try_earliest_start(std::span<const IdleInterval> idle,
                                            std::span<const BusySpan> busy,
                                            Tick t, Tick delta, Tick dur,
                                            Tick horizon = kInfinite);

/// As try_earliest_start, throwing NoFeasibleSlot.
Insertion earliest_start(std::span<const IdleInterval> idle,
                         std::span<const BusySpan> busy, Tick t, Tick delta,
                         Tick dur, Tick horizon = kInfinite);

enum class ViolationKind {
  ResourceOverlap,
  MissingGap,
  TimelineGap,
  TimelineOverlap,
  TransitionMismatch,
  BadSpan,
  Unlinked,
};

std::string to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string subject;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind k) const;
};

/// Gapless: consecutive product entries must touch. AllowWaits: products may
/// wait in the location buffer between entries, but never overlap.
enum class TimelinePolicy { Gapless, AllowWaits };

ValidationReport validate_production_schedule(
    std::span<const ResourceSchedule> resources,
    std::span<const ProductSchedule> products, Tick delta,
    TimelinePolicy policy = TimelinePolicy::Gapless);

}  // namespace resched
