#include "resched/protocol.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace resched {

DisruptionReport affected_events(const ResourceSchedule& rs, Tick now, PriorityWeights w,
                                 const std::map<ProductId, Tick>& due) {
  DisruptionReport report{rs.resource, now, {}};
  for (const auto& e : rs.entries)
    if (e.end > now) report.affected.push_back(e);

  auto g = [&](const ScheduledEvent& e) {
    auto it = due.find(e.product);
    const double d = it == due.end() ? 0.0 : static_cast<double>(it->second);
    return w.w_s / (static_cast<double>(e.start) + 1.0) + w.w_d / (d + 1.0);
  };
  std::stable_sort(report.affected.begin(), report.affected.end(),
                   [&](const ScheduledEvent& a, const ScheduledEvent& b) {
                     const double ga = g(a), gb = g(b);
                     if (ga != gb) return ga > gb;
                     return std::tie(a.start, a.product) < std::tie(b.start, b.product);
                   });
  return report;
}

ReplacementSpan replacement_span(const ScheduledEvent& e_q, const ProductSchedule& ps,
                                 const std::string& disrupted_loc) {
  const auto& es = ps.entries;
  auto it = std::find_if(es.begin(), es.end(),
                         [&](const ScheduledEvent& e) { return e.uid == e_q.uid; });
  if (it == es.end())
    throw EventNotFound("entry " + std::to_string(e_q.uid) + " is not in product " +
                        std::to_string(ps.product));
  const auto q = static_cast<std::size_t>(it - es.begin());
  const auto states = ps.states();

  std::size_t lo = q, hi = q;
  if (e_q.event.kind == EventKind::Transform) {
    while (lo > 0 && states[lo].location == disrupted_loc) --lo;
    while (hi + 1 < es.size() && states[hi + 1].location == disrupted_loc) ++hi;
  }

  ReplacementSpan span;
  span.first = lo;
  span.events.assign(es.begin() + static_cast<std::ptrdiff_t>(lo),
                     es.begin() + static_cast<std::ptrdiff_t>(hi + 1));
  span.x_prior = states[lo];
  span.x_post = states[hi + 1];
  return span;
}

std::vector<ResourceId> CandidateSchedule::resources() const {
  std::vector<ResourceId> out;
  for (const auto& e : events) out.push_back(e.resource);
  return out;
}

std::vector<EventSpec> CandidateSchedule::specs() const {
  std::vector<EventSpec> out;
  for (const auto& e : events) out.push_back(e.event);
  return out;
}

bool RepairEnv::usable(const ResourceId& id) const {
  if (!registry.contains(id)) return false;
  auto it = status.find(id);
  return it == status.end() || it->second.state != ResourceState::Down;
}

Requirements RepairEnv::requirements_for(ProductId p) const {
  auto it = requirements.find(p);
  return it == requirements.end() ? Requirements{} : it->second;
}

std::vector<Path> transport_paths(const std::string& from, const std::string& to,
                                  const Registry& registry,
                                  const std::function<bool(const ResourceId&)>& usable,
                                  int max_hops) {
  if (from == to) return {Path{}};

  std::map<std::string, std::vector<Hop>> out_edges;
  std::map<std::string, std::vector<std::string>> in_edges;
  for (const auto& [id, model] : registry.all()) {
    if (model.klass != ResourceClass::Transportation || !usable(id)) continue;
    for (const auto& ev : model.events) {
      const auto sep = ev.find('>');
      EventSpec spec = EventSpec::transport(ev.substr(5, sep - 5), ev.substr(sep + 1));
      in_edges[spec.to].push_back(spec.from);
      out_edges[spec.from].push_back({id, std::move(spec)});
    }
  }

  // Hop distance of every location to the target.
  std::map<std::string, int> dist{{to, 0}};
  std::deque<std::string> queue{to};
  while (!queue.empty()) {
    const std::string loc = queue.front();
    queue.pop_front();
    if (dist[loc] >= max_hops) continue;
    for (const auto& prev : in_edges[loc]) {
      if (dist.contains(prev)) continue;
      dist[prev] = dist[loc] + 1;
      queue.push_back(prev);
    }
  }
  if (!dist.contains(from)) return {};

  std::vector<Path> paths;
  Path current;
  std::function<void(const std::string&)> walk = [&](const std::string& loc) {
    if (loc == to) {
      paths.push_back(current);
      return;
    }
    const int remaining = dist.at(loc);
    for (const auto& hop : out_edges[loc]) {
      auto d = dist.find(hop.event.to);
      if (d == dist.end() || d->second != remaining - 1) continue;
      current.push_back(hop);
      walk(hop.event.to);
      current.pop_back();
    }
  };
  walk(from);
  return paths;
}

std::vector<Slot> host_slots(const RepairRequest& req, const ResourceId& host,
                             const std::string& host_loc, const Path& in, const Path& out) {
  std::vector<Slot> slots;
  for (const auto& hop : in) slots.push_back({hop.event, hop.robot});
  for (const auto& ev : req.span) {
    if (ev.kind != EventKind::Transform) continue;
    slots.push_back({EventSpec::transform(ev.id, host_loc, ev.from, ev.to), host});
  }
  for (const auto& hop : out) slots.push_back({hop.event, hop.robot});
  return slots;
}

namespace {

// Resource timelines as seen by one candidate: the plan plus the events the
// candidate has already placed and the shifts it has already caused.
class TimingView {
 public:
  TimingView(const Plan& plan, Tick from, Tick horizon)
      : plan_(plan), from_(from), horizon_(horizon) {}

  struct Placement {
    Tick start = 0;
    std::optional<ShiftRecord> shift;
    Insertion insertion;
  };

  std::optional<Placement> place(const ResourceId& r, Tick t, Tick gap, Tick dur) {
    std::vector<EntryId> uids;
    auto planned = plan_.busy_spans(r, &uids);
    std::vector<std::pair<BusySpan, EntryId>> spans;
    for (std::size_t i = 0; i < planned.size(); ++i) {
      BusySpan b = planned[i];
      if (auto it = shifted_.find(uids[i]); it != shifted_.end()) {
        b.end = it->second + (b.end - b.start);
        b.start = it->second;
      }
      spans.emplace_back(b, uids[i]);
    }
    for (const auto& b : added_[r]) spans.emplace_back(b, 0);
    std::stable_sort(spans.begin(), spans.end(),
                     [](const auto& a, const auto& b) { return a.first.start < b.first.start; });

    std::vector<BusySpan> busy;
    for (const auto& [b, uid] : spans) busy.push_back(b);
    const auto idle = idle_intervals(busy, horizon_, from_);
    auto ins = try_earliest_start(idle, busy, t, gap, dur, horizon_);
    if (!ins) return std::nullopt;

    Placement p{ins->start, std::nullopt, *ins};
    if (ins->shift) {
      const EntryId uid = spans[ins->shift->index].second;
      if (uid == 0) return std::nullopt;
      shifted_[uid] = ins->shift->to;
      p.shift = ShiftRecord{uid, plan_.entry(uid).start, ins->shift->to};
    }
    added_[r].push_back({ins->start, ins->start + dur, ins->start + dur});
    return p;
  }

 private:
  const Plan& plan_;
  Tick from_;
  Tick horizon_;
  std::map<EntryId, Tick> shifted_;
  std::map<ResourceId, std::vector<BusySpan>> added_;
};

}  // namespace

std::optional<CandidateSchedule> time_slots(const RepairEnv& env, const RepairRequest& req,
                                            const std::vector<Slot>& slots, Tick not_before,
                                            const ResourceId& held) {
  TimingView view(env.plan, env.now, env.horizon);
  CandidateSchedule cand;
  Tick t = req.requested_time;
  for (const auto& slot : slots) {
    const Tick dur = env.registry.at(slot.resource).cost(slot.event.id);
    const Tick gap = env.gap(slot.resource);
    const Tick want = slot.resource == held ? std::max(t, not_before) : t;
    auto p = view.place(slot.resource, want, gap, dur);
    if (!p) return std::nullopt;
    cand.events.push_back({slot.event, slot.resource, p->start, p->start + dur});
    if (p->shift) {
      auto same = std::find_if(cand.shifts.begin(), cand.shifts.end(),
                               [&](const ShiftRecord& s) { return s.uid == p->shift->uid; });
      if (same == cand.shifts.end())
        cand.shifts.push_back(*p->shift);
      else
        same->to = p->shift->to;
    }
    cand.slack_terms.push_back({slot.resource, p->start, p->insertion.t_max, p->insertion.bound,
                                p->insertion.posterior_duration, dur, gap});
    t = p->start + dur;
  }
  return cand;
}

std::vector<CandidateSchedule> distinct_by_resources(std::vector<CandidateSchedule> all) {
  std::vector<CandidateSchedule> out;
  std::map<std::vector<ResourceId>, std::size_t> seen;
  for (auto& c : all) {
    auto key = c.resources();
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), out.size());
      out.push_back(std::move(c));
    } else if (c.completion() < out[it->second].completion()) {
      out[it->second] = std::move(c);
    }
  }
  return out;
}

std::size_t broadcast_request(const RepairRequest& req, const std::set<ResourceId>& cluster,
                              MessageBus& bus, Tick tick) {
  if (cluster.empty())
    throw EmptyCluster("no other resource can perform " + req.affected_event.id);
  for (const auto& member : cluster)
    bus.send(tick, req.disrupted, member, MessageKind::BidRequest, req.span.size());
  return cluster.size();
}

namespace {

bool is_transport_span(const RepairRequest& req) {
  return req.span.size() == 1 && req.span.front().kind == EventKind::Transport;
}

std::size_t hops_of(const std::vector<Path>& paths, int max_hops) {
  return paths.empty() ? static_cast<std::size_t>(max_hops) : paths.front().size();
}

}  // namespace

BidResult generate_candidate(const CapabilityModel& bidder, const RepairRequest& req,
                             const RepairEnv& env, MessageBus& bus) {
  BidResult out;
  const Tick tick = env.now;

  if (is_transport_span(req)) {
    if (!bidder.has_event(req.span.front().id)) return out;
    if (auto c = time_slots(env, req, {{req.span.front(), bidder.resource}}))
      out.candidates.push_back(std::move(*c));
    return out;
  }

  double penalty = 0.0;
  for (const auto& ev : req.span) {
    if (ev.kind != EventKind::Transform) continue;
    const auto m = match_requirements(ev.id, req.requirements, bidder);
    if (!m.accepted) return out;
    penalty += m.penalty;
  }

  const std::string& host_loc = bidder.home();
  auto usable = [&](const ResourceId& id) { return id != req.disrupted && env.usable(id); };

  std::set<ResourceId> asked;
  std::vector<ResourceId> frontier;
  for (const auto& r : collaborative_ras(host_loc, bidder.resource, env.registry)) {
    if (!usable(r)) continue;
    bus.send(tick, bidder.resource, r, MessageKind::CollabRequest);
    bus.send(tick, r, bidder.resource, MessageKind::CollabResponse);
    out.messages += 2;
    asked.insert(r);
    frontier.push_back(r);
  }

  const auto in = transport_paths(req.x_prior.location, host_loc, env.registry, usable,
                                  env.max_hops);
  const auto outbound = transport_paths(host_loc, req.x_post.location, env.registry, usable,
                                        env.max_hops);

  const std::size_t needed = std::max(hops_of(in, env.max_hops), hops_of(outbound, env.max_hops));
  for (std::size_t level = 2; level <= needed && !frontier.empty(); ++level) {
    std::vector<ResourceId> next;
    for (const auto& r : frontier) {
      for (const auto& loc : env.registry.at(r).locations) {
        for (const auto& k : collaborative_ras(loc, r, env.registry)) {
          if (asked.contains(k) || !usable(k) ||
              env.registry.at(k).klass != ResourceClass::Transportation)
            continue;
          bus.send(tick, r, k, MessageKind::PropagationRequest);
          bus.send(tick, k, r, MessageKind::PropagationResponse);
          out.messages += 2;
          asked.insert(k);
          next.push_back(k);
        }
      }
    }
    frontier = std::move(next);
  }

  if (in.empty() || outbound.empty()) return out;

  std::vector<CandidateSchedule> all;
  for (const auto& a : in) {
    for (const auto& b : outbound) {
      auto c = time_slots(env, req, host_slots(req, bidder.resource, host_loc, a, b));
      if (!c) continue;
      c->penalty = penalty;
      all.push_back(std::move(*c));
    }
  }
  out.candidates = distinct_by_resources(std::move(all));
  return out;
}

std::size_t notify_sequential_removals(const ReplacementSpan& span, const ResourceId& disrupted,
                                       MessageBus& bus, Tick tick) {
  std::size_t n = 0;
  for (const auto& e : span.events) {
    if (e.resource == disrupted) continue;
    bus.send(tick, disrupted, e.resource, MessageKind::RemovalNotice);
    ++n;
  }
  return n;
}

RepairRequest make_request(const RepairEnv& env, const ScheduledEvent& e_q,
                           const ReplacementSpan& span, const ProductSchedule& remaining) {
  RepairRequest req;
  req.affected_event = e_q.event;
  req.disrupted = e_q.resource;
  if (e_q.event.kind == EventKind::Transform) req.requirements = env.requirements_for(e_q.product);
  req.x_prior = span.x_prior;
  req.x_post = span.x_post;
  req.product = e_q.product;
  const Tick ready =
      span.first > 0 ? remaining.entries[span.first - 1].end : remaining.ready;
  req.requested_time = std::max(env.now, ready);
  for (const auto& e : span.events) {
    req.span.push_back(e.event);
    req.span_uids.push_back(e.uid);
  }
  return req;
}

std::vector<EntryId> commit(RepairEnv& env, const RepairRequest& req,
                            const CandidateSchedule& cand) {
  std::vector<ScheduledEvent> fresh;
  for (const auto& e : cand.events) {
    ScheduledEvent s;
    s.event = e.event;
    s.product = req.product;
    s.resource = e.resource;
    s.start = e.start;
    s.end = e.end;
    fresh.push_back(std::move(s));
  }
  auto ids = env.plan.replace_span(req.product, req.span_uids, std::move(fresh));
  for (const auto& s : cand.shifts)
    if (env.plan.contains(s.uid)) env.plan.retime(s.uid, s.to);
  env.plan.settle(env.delta);
  return ids;
}

}  // namespace resched
