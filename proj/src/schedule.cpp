#include "resched/schedule.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace resched {

std::string to_string(const ProductState& s) {
  return "(" + s.location + ", " + s.composition + ")";
}

std::string transport_id(const std::string& from, const std::string& to) {
  return "move:" + from + ">" + to;
}

EventSpec EventSpec::transport(std::string from_loc, std::string to_loc) {
  EventSpec e;
  e.id = transport_id(from_loc, to_loc);
  e.kind = EventKind::Transport;
  e.from = std::move(from_loc);
  e.to = std::move(to_loc);
  return e;
}

EventSpec EventSpec::transform(std::string process, std::string at,
                               std::string pre, std::string post) {
  EventSpec e;
  e.id = std::move(process);
  e.kind = EventKind::Transform;
  e.location = std::move(at);
  e.from = std::move(pre);
  e.to = std::move(post);
  return e;
}

ProductState apply_transition(const ProductState& state, const EventSpec& event) {
  if (event.kind == EventKind::Transport) {
    if (state.location != event.from) {
      throw InapplicableEvent(0, event.id + " needs location " + event.from +
                                     ", product is at " + state.location);
    }
    return {event.to, state.composition};
  }
  if (state.location != event.location) {
    throw InapplicableEvent(0, event.id + "@" + event.location +
                                   " applied at " + state.location);
  }
  if (state.composition != event.from) {
    throw InapplicableEvent(0, event.id + " needs composition " + event.from +
                                   ", product has " + state.composition);
  }
  return {state.location, event.to};
}

ProductState apply_sequence(const ProductState& state,
                            std::span<const EventSpec> seq) {
  ProductState x = state;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    try {
      x = apply_transition(x, seq[i]);
    } catch (const InapplicableEvent& e) {
      throw InapplicableEvent(i, "event " + std::to_string(i) + ": " + e.what());
    }
  }
  return x;
}

std::vector<ProductState> ProductSchedule::states() const {
  std::vector<ProductState> out{initial};
  out.reserve(entries.size() + 1);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    try {
      out.push_back(apply_transition(out.back(), entries[i].event));
    } catch (const InapplicableEvent& e) {
      throw InapplicableEvent(i, "event " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

namespace {

std::vector<std::size_t> order_by_start(std::span<const BusySpan> busy) {
  std::vector<std::size_t> idx(busy.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return busy[a].start < busy[b].start;
  });
  return idx;
}

std::vector<BusySpan> spans_of(const ResourceSchedule& rs) {
  std::vector<BusySpan> out;
  out.reserve(rs.entries.size());
  for (const auto& e : rs.entries) out.push_back({e.start, e.end, kInfinite});
  return out;
}

}  // namespace

std::vector<IdleInterval> idle_intervals(std::span<const BusySpan> busy,
                                         Tick horizon, Tick from) {
  std::vector<IdleInterval> out;
  Tick cursor = from;
  for (std::size_t i : order_by_start(busy)) {
    if (cursor >= horizon) break;
    const BusySpan& b = busy[i];
    if (b.end <= cursor) continue;
    if (b.start > cursor) out.push_back({cursor, std::min(b.start, horizon)});
    cursor = std::max(cursor, b.end);
  }
  if (cursor < horizon) out.push_back({cursor, horizon});
  return out;
}

std::vector<IdleInterval> idle_intervals(const ResourceSchedule& rs, Tick horizon,
                                         Tick from) {
  const auto spans = spans_of(rs);
  return idle_intervals(spans, horizon, from);
}

std::optional<Insertion> try_earliest_start(std::span<const IdleInterval> idle,
                                            std::span<const BusySpan> busy,
                                            Tick t, Tick delta, Tick dur,
                                            Tick horizon) {
  const auto order = order_by_start(busy);
  for (const IdleInterval& w : idle) {
    const Tick s = std::max(t, w.lo + delta);

    // Posterior span B is the first one starting at or after the window end.
    auto it = std::find_if(order.begin(), order.end(),
                           [&](std::size_t i) { return busy[i].start >= w.hi; });
    if (is_infinite(w.hi) || it == order.end()) {
      if (!is_infinite(horizon) && s + dur + delta > horizon) continue;
      return Insertion{s, std::nullopt, kInfinite, kInfinite, 0};
    }

    const std::size_t b_idx = *it;
    const BusySpan& b = busy[b_idx];
    if (s > b.start) continue;
    const Tick b_len = b.end - b.start;
    const Tick next_start = std::next(it) != order.end() ? busy[*std::next(it)].start
                                                         : horizon;
    Tick bound = std::min(is_infinite(next_start) ? kInfinite : next_start - delta,
                          b.latest_end);
    const Tick t_max = is_infinite(bound) ? kInfinite : bound - b_len - delta - dur;
    if (s > t_max) continue;

    Insertion ins{s, std::nullopt, t_max, bound, b_len};
    if (s + dur + delta > b.start) ins.shift = SpanShift{b_idx, b.start, s + dur + delta};
    return ins;
  }
  return std::nullopt;
}

Insertion earliest_start(std::span<const IdleInterval> idle,
                         std::span<const BusySpan> busy, Tick t, Tick delta,
                         Tick dur, Tick horizon) {
  if (auto ins = try_earliest_start(idle, busy, t, delta, dur, horizon)) return *ins;
  throw NoFeasibleSlot("no idle window admits a " + std::to_string(dur) +
                       "-tick event requested at " + std::to_string(t));
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::ResourceOverlap: return "resource-overlap";
    case ViolationKind::MissingGap: return "missing-gap";
    case ViolationKind::TimelineGap: return "timeline-gap";
    case ViolationKind::TimelineOverlap: return "timeline-overlap";
    case ViolationKind::TransitionMismatch: return "transition-mismatch";
    case ViolationKind::BadSpan: return "bad-span";
    case ViolationKind::Unlinked: return "unlinked";
  }
  return "unknown";
}

std::size_t ValidationReport::count(ViolationKind k) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(),
      [k](const Violation& v) { return v.kind == k; }));
}

ValidationReport validate_production_schedule(
    std::span<const ResourceSchedule> resources,
    std::span<const ProductSchedule> products, Tick delta,
    TimelinePolicy policy) {
  ValidationReport report;
  auto flag = [&](ViolationKind k, std::string subject, std::string detail) {
    report.violations.push_back({k, std::move(subject), std::move(detail)});
  };
  auto span_str = [](const ScheduledEvent& e) {
    std::ostringstream os;
    os << e.event.id << "#" << e.uid << "[" << e.start << "," << e.end << "]";
    return os.str();
  };

  std::map<EntryId, std::pair<Tick, Tick>> on_resources;
  for (const ResourceSchedule& rs : resources) {
    std::vector<const ScheduledEvent*> sorted;
    for (const auto& e : rs.entries) {
      sorted.push_back(&e);
      on_resources[e.uid] = {e.start, e.end};
      if (e.end <= e.start || e.start < 0) flag(ViolationKind::BadSpan, rs.resource, span_str(e));
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](auto* a, auto* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const auto& a = *sorted[i - 1];
      const auto& b = *sorted[i];
      if (b.start < a.end) {
        flag(ViolationKind::ResourceOverlap, rs.resource, span_str(a) + " vs " + span_str(b));
      } else if (rs.machine && b.start - a.end < delta) {
        flag(ViolationKind::MissingGap, rs.resource, span_str(a) + " vs " + span_str(b));
      }
    }
  }

  std::set<EntryId> on_products;
  for (const ProductSchedule& ps : products) {
    const std::string subject = "product " + std::to_string(ps.product);
    ProductState x = ps.initial;
    for (std::size_t k = 0; k < ps.entries.size(); ++k) {
      const auto& e = ps.entries[k];
      on_products.insert(e.uid);
      try {
        x = apply_transition(x, e.event);
      } catch (const InapplicableEvent& err) {
        flag(ViolationKind::TransitionMismatch, subject,
             "index " + std::to_string(k) + ": " + err.what());
        break;
      }
      auto found = on_resources.find(e.uid);
      if (found == on_resources.end() || found->second != std::pair{e.start, e.end}) {
        flag(ViolationKind::Unlinked, subject, span_str(e) + " not on " + e.resource);
      }
      if (k == 0) {
        if (e.start < ps.ready)
          flag(ViolationKind::TimelineOverlap, subject, span_str(e) + " before ready");
        continue;
      }
      const auto& prev = ps.entries[k - 1];
      if (e.start < prev.end) {
        flag(ViolationKind::TimelineOverlap, subject, span_str(prev) + " then " + span_str(e));
      } else if (policy == TimelinePolicy::Gapless && e.start != prev.end) {
        flag(ViolationKind::TimelineGap, subject, span_str(prev) + " then " + span_str(e));
      }
    }
  }
  if (!products.empty()) {
    for (const auto& [uid, times] : on_resources) {
      if (!on_products.contains(uid))
        flag(ViolationKind::Unlinked, "entry " + std::to_string(uid), "no product owns it");
    }
  }
  return report;
}

}  // namespace resched
