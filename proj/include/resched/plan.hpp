#pragma once

#include <map>
#include <set>
#include <vector>

#include "resched/schedule.hpp"

namespace resched {

/// The production schedule: every scheduled event, indexed both by the
/// resource that performs it and by the product it is performed on.
///
/// Entries may be detached from their resource while a repair is being
/// negotiated; they stay in the product sequence until replaced.
class Plan {
 public:
  struct Track {
    ProductState initial;
    Tick release = 0;
    std::vector<EntryId> sequence;
  };

  void add_resource(const ResourceId& id, bool machine);
  void add_product(ProductId id, ProductState initial, Tick release);

  /// Appends to the product sequence and inserts into the resource timeline.
  EntryId append(ScheduledEvent e);

  bool contains(EntryId uid) const { return entries_.contains(uid); }
  const ScheduledEvent& entry(EntryId uid) const;

  std::vector<ResourceId> resources() const;
  std::vector<ProductId> products() const;
  bool is_machine(const ResourceId& id) const;
  const Track& track(ProductId id) const;
  /// Attached entries of a resource ordered by start.
  const std::vector<EntryId>& timeline(const ResourceId& id) const;

  ResourceSchedule resource_schedule(const ResourceId& id) const;
  ProductSchedule product_schedule(ProductId id) const;
  /// The not-yet-started tail of a product schedule. `initial` is the state
  /// after the last started entry and `ready` the tick it holds from.
  ProductSchedule remaining_schedule(ProductId id) const;

  std::vector<ResourceSchedule> all_resource_schedules() const;
  std::vector<ProductSchedule> all_product_schedules() const;

  /// Busy spans of a resource with their shift bounds: started entries and
  /// entries whose product successor is detached cannot move; others may
  /// move until their product successor starts.
  std::vector<BusySpan> busy_spans(const ResourceId& id,
                                   std::vector<EntryId>* uids = nullptr) const;

  void mark_started(EntryId uid, Tick start, Tick end);
  bool started(EntryId uid) const { return started_.contains(uid); }
  void mark_done(EntryId uid) { done_.insert(uid); }
  bool done(EntryId uid) const { return done_.contains(uid); }

  void detach(EntryId uid);
  bool attached(EntryId uid) const { return !detached_.contains(uid); }

  /// Moves an attached entry, keeping its duration.
  void retime(EntryId uid, Tick start);

  /// Replaces `old` (a contiguous run of the product sequence) with `fresh`.
  std::vector<EntryId> replace_span(ProductId pid, const std::vector<EntryId>& old,
                                    std::vector<ScheduledEvent> fresh);

  /// Right-shifts unstarted entries until no resource runs two at once
  /// (machines keep `delta` between them) and every product successor
  /// starts after its predecessor ends. Entries are placed in order of
  /// their earliest feasible start; started entries stay put. Returns the
  /// entries that moved.
  std::vector<EntryId> settle(Tick delta);

  /// Drops every entry of a product that has not started.
  std::vector<EntryId> cancel_pending(ProductId pid);

  /// Successor of an entry in its product sequence, if any.
  std::optional<EntryId> successor(EntryId uid) const;
  std::optional<EntryId> predecessor(EntryId uid) const;

  std::size_t size() const { return entries_.size(); }

 private:
  void attach(EntryId uid);
  void erase(EntryId uid);
  std::size_t position(ProductId pid, EntryId uid) const;

  EntryId next_uid_ = 1;
  std::map<EntryId, ScheduledEvent> entries_;
  std::map<ResourceId, bool> machine_;
  std::map<ResourceId, std::vector<EntryId>> by_resource_;
  std::map<ProductId, Track> tracks_;
  std::set<EntryId> started_;
  std::set<EntryId> done_;
  std::set<EntryId> detached_;
};

}  // namespace resched
