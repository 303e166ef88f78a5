#include "resched/repair.hpp"

#include <chrono>

namespace resched {

std::string to_string(Mode m) { return m == Mode::Centralized ? "centralized" : "distributed"; }

Mode parse_mode(const std::string& s) {
  if (s == "centralized") return Mode::Centralized;
  if (s == "distributed") return Mode::Distributed;
  throw ConfigError("unknown mode " + s);
}

namespace {

void mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 1099511628211ULL;
  }
}

void mix(std::uint64_t& h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  mix(h, static_cast<std::uint64_t>(s.size()));
}

struct Round {
  std::vector<CandidateSchedule> candidates;
  std::size_t messages = 0;
  std::optional<EscalationReason> failure;
};

Round distributed_round(const RepairEnv& env, const RepairRequest& req, MessageBus& bus) {
  Round r;
  const Tick tick = env.now;
  bus.send(tick, req.disrupted, "directory", MessageKind::DirectoryQuery);
  bus.send(tick, "directory", req.disrupted, MessageKind::DirectoryReply);
  r.messages += 2;

  std::set<ResourceId> cluster;
  for (const auto& id : clustering_ras(req.affected_event.id, req.disrupted, env.registry))
    if (env.usable(id)) cluster.insert(id);
  try {
    r.messages += broadcast_request(req, cluster, bus, tick);
  } catch (const EmptyCluster&) {
    r.failure = EscalationReason::EmptyCluster;
    return r;
  }
  for (const auto& member : cluster) {
    auto bid = generate_candidate(env.registry.at(member), req, env, bus);
    bus.send(tick, member, req.disrupted, MessageKind::BidResponse, bid.candidates.size());
    r.messages += bid.messages + 1;
    for (auto& c : bid.candidates) r.candidates.push_back(std::move(c));
  }
  if (r.candidates.empty()) r.failure = EscalationReason::NoCapacity;
  return r;
}

std::size_t count_transforms(const std::vector<EventSpec>& span) {
  std::size_t n = 0;
  for (const auto& e : span) n += e.kind == EventKind::Transform;
  return n;
}

}  // namespace

std::uint64_t candidate_seed(std::uint64_t base, Tick now, const CandidateSchedule& c) {
  std::uint64_t h = 14695981039346656037ULL;
  mix(h, base);
  mix(h, static_cast<std::uint64_t>(now));
  for (const auto& e : c.events) {
    mix(h, e.resource);
    mix(h, e.event.id);
    mix(h, static_cast<std::uint64_t>(e.start));
    mix(h, static_cast<std::uint64_t>(e.end));
  }
  return h;
}

std::vector<Evaluated> evaluate_all(const RepairEnv& env, std::vector<CandidateSchedule> cands,
                                    const RepairSettings& settings) {
  std::vector<Evaluated> out;
  out.reserve(cands.size());
  for (auto& c : cands) {
    Evaluated e;
    e.risk = assess(c, env.registry, env.status, settings.objective.weights,
                    settings.uncertainty, candidate_seed(settings.seed, env.now, c));
    e.j = evaluate(c, settings.objective, &e.risk);
    e.candidate = std::move(c);
    out.push_back(std::move(e));
  }
  return out;
}

DisruptionOutcome handle_disruption(RepairEnv& env, const ResourceId& disrupted, Tick down_until,
                                    const std::map<ProductId, Tick>& due,
                                    const RepairSettings& settings, MessageBus& bus) {
  const auto t0 = std::chrono::steady_clock::now();
  DisruptionOutcome outcome;
  const Tick now = env.now;
  const auto& model = env.registry.at(disrupted);
  const std::string loc =
      model.klass == ResourceClass::Transformation ? model.home() : std::string{};

  const auto report =
      affected_events(env.plan.resource_schedule(disrupted), now, settings.priority, due);
  outcome.affected = report.affected.size();

  for (const auto& listed : report.affected) {
    if (!env.plan.contains(listed.uid) || env.plan.started(listed.uid) ||
        !env.plan.attached(listed.uid))
      continue;
    const ScheduledEvent e_q = env.plan.entry(listed.uid);
    const ProductSchedule remaining = env.plan.remaining_schedule(e_q.product);
    const ReplacementSpan span = replacement_span(e_q, remaining, loc);
    const RepairRequest req = make_request(env, e_q, span, remaining);
    for (EntryId uid : req.span_uids) env.plan.detach(uid);

    RepairRecord rec;
    rec.tick = now;
    rec.resource = disrupted;
    rec.product = e_q.product;
    rec.event = e_q.event.id;
    rec.span_length = req.span.size();
    rec.transforms = count_transforms(req.span);
    rec.request = req;

    Decision decision;
    if (settings.mode == Mode::Distributed) {
      rec.messages += notify_sequential_removals(span, disrupted, bus, now);
      Round round = distributed_round(env, req, bus);
      rec.messages += round.messages;
      rec.candidates = round.candidates.size();
      rec.offered = round.candidates;
      decision = select(evaluate_all(env, std::move(round.candidates), settings));
      if (!decision.escalated) {
        rec.outcome = "distributed";
        for (const auto& ev : decision.chosen->candidate.events)
          bus.send(now, disrupted, ev.resource, MessageKind::Inform);
        rec.messages += decision.chosen->candidate.events.size();
        if (settings.shadow_centralized) {
          auto central = select(evaluate_all(env, centralized_candidates(env, req), settings));
          if (!central.escalated) rec.central_j = central.j_value;
        }
      } else {
        outcome.escalations.push_back(escalate(req, now, *round.failure));
      }
    }
    if (decision.escalated) {
      rec.messages += centralized_messages(env, req, bus);
      auto cands = centralized_candidates(env, req);
      rec.candidates += cands.size();
      rec.offered.insert(rec.offered.end(), cands.begin(), cands.end());
      decision = select(evaluate_all(env, std::move(cands), settings));
      if (!decision.escalated) {
        rec.outcome = "centralized";
        rec.central_j = decision.j_value;
      } else {
        outcome.escalations.push_back(escalate(req, now, EscalationReason::CentralizedEmpty));
      }
    }
    if (decision.escalated) {
      std::vector<Slot> slots;
      for (const auto& e : span.events) slots.push_back({e.event, e.resource});
      auto waiting = time_slots(env, req, slots, down_until, disrupted);
      if (waiting) {
        decision = select(evaluate_all(env, {std::move(*waiting)}, settings));
        rec.outcome = "deferred";
      }
    }

    if (decision.escalated) {
      rec.outcome = "dropped";
      env.plan.cancel_pending(req.product);
    } else {
      rec.chosen = decision.chosen->candidate;
      rec.j = decision.j_value;
      rec.risk = decision.chosen->risk.unscaled(settings.objective.weights);
      commit(env, req, rec.chosen);
    }
    outcome.messages += rec.messages;
    outcome.rescheduled_processes += rec.transforms;
    outcome.repairs.push_back(std::move(rec));
  }

  outcome.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return outcome;
}

}  // namespace resched
