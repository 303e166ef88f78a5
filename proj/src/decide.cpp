#include "resched/decide.hpp"

#include <algorithm>
#include <tuple>

namespace resched {

void Objective::check() const {
  if (alpha.size() != metrics.size())
    throw ConfigError("objective needs one alpha per metric");
  for (double a : alpha)
    if (a < 0.0) throw ConfigError("objective weights must be non-negative");
  if (beta < 0.0) throw ConfigError("penalty weight must be non-negative");
  for (const auto& m : metrics)
    if (m != "completion" && m != "events") throw ConfigError("unknown objective metric " + m);
  weights.check();
}

double evaluate(const CandidateSchedule& candidate, const Objective& objective,
                const RiskReport* risk) {
  double j = 0.0;
  for (std::size_t i = 0; i < objective.metrics.size(); ++i) {
    const auto& m = objective.metrics[i];
    const double c = m == "completion" ? static_cast<double>(candidate.completion())
                                       : static_cast<double>(candidate.events.size());
    j += objective.alpha[i] * c;
  }
  j += objective.beta * candidate.penalty;
  if (objective.risk_enabled && risk) j += risk->total;
  return j;
}

bool better(const Evaluated& a, const Evaluated& b) {
  const auto ka = std::make_tuple(a.j, a.candidate.completion(), a.candidate.events.size());
  const auto kb = std::make_tuple(b.j, b.candidate.completion(), b.candidate.events.size());
  if (ka != kb) return ka < kb;
  return a.candidate.resources() < b.candidate.resources();
}

Decision select(std::vector<Evaluated> evaluated) {
  Decision d;
  if (!evaluated.empty()) {
    auto best = std::min_element(evaluated.begin(), evaluated.end(), better);
    d.chosen = *best;
    d.j_value = best->j;
    d.escalated = false;
  }
  d.all_evaluated = std::move(evaluated);
  return d;
}

std::vector<CandidateSchedule> centralized_candidates(const RepairEnv& env,
                                                      const RepairRequest& req) {
  auto usable = [&](const ResourceId& id) { return id != req.disrupted && env.usable(id); };
  std::vector<CandidateSchedule> all;

  if (req.span.size() == 1 && req.span.front().kind == EventKind::Transport) {
    for (const auto& path : transport_paths(req.x_prior.location, req.x_post.location,
                                            env.registry, usable, env.max_hops)) {
      std::vector<Slot> slots;
      for (const auto& hop : path) slots.push_back({hop.event, hop.robot});
      if (slots.empty()) continue;
      if (auto c = time_slots(env, req, slots)) all.push_back(std::move(*c));
    }
    return distinct_by_resources(std::move(all));
  }

  for (const auto& [id, model] : env.registry.all()) {
    if (model.klass != ResourceClass::Transformation || !usable(id)) continue;
    double penalty = 0.0;
    bool ok = true;
    for (const auto& ev : req.span) {
      if (ev.kind != EventKind::Transform) continue;
      const auto m = match_requirements(ev.id, req.requirements, model);
      ok = ok && m.accepted;
      penalty += m.penalty;
    }
    if (!ok) continue;
    const auto& loc = model.home();
    const auto in = transport_paths(req.x_prior.location, loc, env.registry, usable, env.max_hops);
    const auto out = transport_paths(loc, req.x_post.location, env.registry, usable, env.max_hops);
    for (const auto& a : in) {
      for (const auto& b : out) {
        auto c = time_slots(env, req, host_slots(req, id, loc, a, b));
        if (!c) continue;
        c->penalty = penalty;
        all.push_back(std::move(*c));
      }
    }
  }
  return distinct_by_resources(std::move(all));
}

std::size_t centralized_messages(const RepairEnv& env, const RepairRequest& req,
                                 MessageBus& bus) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < req.span.size(); ++k) {
    for (const auto& [id, model] : env.registry.all()) {
      bus.send(env.now, "central", id, MessageKind::CentralQuery);
      ++n;
    }
  }
  return n;
}

std::string to_string(EscalationReason r) {
  switch (r) {
    case EscalationReason::EmptyCluster: return "EmptyCluster";
    case EscalationReason::NoCapacity: return "NoCapacity";
    case EscalationReason::CentralizedEmpty: return "CentralizedEmpty";
  }
  return "?";
}

EscalationRecord escalate(const RepairRequest& req, Tick tick, EscalationReason reason) {
  return {tick, req.disrupted, req.product, req.affected_event.id, reason};
}

}  // namespace resched
