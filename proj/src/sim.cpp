#include "resched/sim.hpp"

#include <algorithm>
#include <sstream>

namespace resched {

void SimConfig::check() const {
  if (max_hops < 1) throw ConfigError("max_hops must be at least 1");
  if (n_samples < 1) throw ConfigError("n_samples must be at least 1");
  if (beta < 0.0) throw ConfigError("beta must be non-negative");
  weights.check();
}

double breakdown_chance(const MachineRuntime& m, CheckContext ctx, const StochasticParams& p) {
  const double ratio = static_cast<double>(m.status.op_count) / m.status.nominal_ops;
  const double at_start = std::min(p.max_p, m.base_hazard * p.hazard_scale * ratio);
  return ctx == CheckContext::OperationStart ? at_start : at_start * p.idle_factor;
}

bool sample_breakdown(const MachineRuntime& m, CheckContext ctx, const StochasticParams& p,
                      std::mt19937_64& rng) {
  const double chance = breakdown_chance(m, ctx, p);
  if (chance <= 0.0) return false;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < chance;
}

Tick sample_repair_time(const StochasticParams& p, std::mt19937_64& rng) {
  return std::uniform_int_distribution<Tick>(p.mttr_lo, p.mttr_hi)(rng);
}

std::string to_string(SimEventKind k) {
  switch (k) {
    case SimEventKind::Start: return "start";
    case SimEventKind::Finish: return "finish";
    case SimEventKind::Exit: return "exit";
    case SimEventKind::Breakdown: return "breakdown";
    case SimEventKind::Repair: return "repair";
    case SimEventKind::Damage: return "damage";
  }
  return "?";
}

World::World(const Scenario& scenario, const InitialSchedule& initial, const SimConfig& config,
             std::uint64_t seed)
    : scenario_(scenario), config_(config), registry_(scenario.registry()), plan_(initial.plan),
      seed_(seed), utilization_(initial.utilization) {
  config_.check();
  bus_.set_tracing(config_.trace_messages);
  std::uint32_t index = 0;
  for (const auto& [id, model] : registry_.all()) {
    index_[id] = index;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      index++, 0x5eedu};
    std::mt19937_64 rng(seq);
    if (model.klass != ResourceClass::Transformation) continue;
    const auto& st = scenario.stochastic;
    MachineRuntime m;
    m.base_hazard = std::uniform_real_distribution<double>(st.hazard_lo, st.hazard_hi)(rng);
    m.status.nominal_ops =
        std::uniform_int_distribution<int>(st.nominal_ops_lo, st.nominal_ops_hi)(rng);
    machines_.emplace(id, m);
  }
  for (const auto& rel : scenario.releases()) {
    release_[rel.id] = rel.release;
    due_[rel.id] = rel.release + scenario.due_offset;
    requirements_[rel.id] = scenario.type(rel.type).requirements;
    total_processes_ += scenario.type(rel.type).route.size();
  }
}

std::mt19937_64 World::stream(std::uint32_t tag, std::uint32_t a, std::uint32_t b,
                              std::uint32_t c) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                    tag, a, b, c};
  return std::mt19937_64(seq);
}

void World::force_breakdown(const ResourceId& machine, Tick at) {
  if (!machines_.contains(machine)) throw ConfigError("no machine " + machine);
  forced_[at].push_back(machine);
}

std::map<ResourceId, ResourceStatus> World::statuses() const {
  std::map<ResourceId, ResourceStatus> out;
  for (const auto& [id, m] : machines_) out[id] = m.status;
  return out;
}

bool World::finished() const {
  return exits_.size() + damaged_.size() + dropped_.size() >= release_.size() ||
         now_ > scenario_.horizon;
}

void World::finish_operations(std::vector<SimEvent>& out) {
  for (auto it = running_.begin(); it != running_.end();) {
    if (it->second.until != now_) {
      ++it;
      continue;
    }
    const ResourceId id = it->first;
    const EntryId uid = it->second.uid;
    it = running_.erase(it);
    plan_.mark_done(uid);
    const ProductId p = plan_.entry(uid).product;
    out.push_back({now_, SimEventKind::Finish, id, p});
    if (auto m = machines_.find(id); m != machines_.end()) {
      ++m->second.status.op_count;
      m->second.status.state = ResourceState::Idle;
    }
    if (!plan_.successor(uid)) {
      exits_[p] = now_;
      out.push_back({now_, SimEventKind::Exit, id, p});
    }
  }
}

void World::repair_machines(std::vector<SimEvent>& out) {
  for (auto& [id, m] : machines_) {
    if (m.status.state == ResourceState::Down && m.status.down_until == now_) {
      m.status.repair();
      out.push_back({now_, SimEventKind::Repair, id, 0});
    }
  }
}

void World::damage(ProductId p, std::vector<SimEvent>& out) {
  plan_.cancel_pending(p);
  damaged_.insert(p);
  out.push_back({now_, SimEventKind::Damage, {}, p});
}

void World::break_down(const ResourceId& id, std::vector<SimEvent>& out) {
  auto& m = machines_.at(id);
  auto rng = stream(3, index_.at(id), epoch_[id]++);
  const Tick until = now_ + sample_repair_time(scenario_.stochastic, rng);
  m.status.break_down(until);
  ++broken_;
  ++disruptions_;
  out.push_back({now_, SimEventKind::Breakdown, id, 0});

  RepairSettings settings;
  settings.mode = config_.mode;
  settings.objective.beta = config_.beta;
  settings.objective.weights = config_.weights;
  settings.objective.risk_enabled = config_.risk_enabled;
  settings.uncertainty = {scenario_.stochastic.sigma_frac, config_.n_samples};
  settings.priority = config_.priority;
  settings.seed = seed_;
  settings.shadow_centralized = config_.shadow_centralized;

  const auto status = statuses();
  RepairEnv env{plan_, registry_, status, scenario_.delta, now_, kInfinite, config_.max_hops,
                requirements_};
  auto outcome = handle_disruption(env, id, until, due_, settings, bus_);

  communications_ += outcome.messages;
  rescheduled_ += outcome.rescheduled_processes;
  escalations_ += outcome.escalations.size();
  wall_ms_ += outcome.wall_ms;
  Message delivered;
  while (bus_.deliver(delivered)) {
  }
  for (auto& r : outcome.repairs) {
    if (r.outcome == "dropped") dropped_.insert(r.product);
    if (config_.validate_repairs && r.outcome != "dropped") {
      try {
        const auto specs = r.chosen.specs();
        if (apply_sequence(r.request.x_prior, specs) != r.request.x_post)
          violations_.push_back("span end state mismatch for product " +
                                std::to_string(r.product));
      } catch (const InapplicableEvent& e) {
        violations_.push_back(e.what());
      }
      for (std::size_t k = 1; k < r.chosen.events.size(); ++k)
        if (r.chosen.events[k - 1].end > r.chosen.events[k].start)
          violations_.push_back("precedence broken for product " + std::to_string(r.product));
    }
    log_.push_back(std::move(r));
  }
  if (config_.validate_repairs) {
    const auto rs = plan_.all_resource_schedules();
    const auto ps = plan_.all_product_schedules();
    for (const auto& v :
         validate_production_schedule(rs, ps, scenario_.delta, TimelinePolicy::AllowWaits)
             .violations)
      violations_.push_back(to_string(v.kind) + " " + v.subject + " " + v.detail);
  }
}

void World::idle_checkpoints(std::vector<SimEvent>& out) {
  const Tick every = scenario_.stochastic.idle_check;
  std::vector<ResourceId> broken;
  if (auto f = forced_.find(now_); f != forced_.end()) broken = f->second;
  if (every > 0 && now_ > 0 && now_ % every == 0) {
    for (const auto& [id, m] : machines_) {
      if (m.status.state == ResourceState::Down || running_.contains(id)) continue;
      if (std::find(broken.begin(), broken.end(), id) != broken.end()) continue;
      auto rng = stream(2, index_.at(id), static_cast<std::uint32_t>(now_ / every));
      if (sample_breakdown(m, CheckContext::IdleCheckpoint, scenario_.stochastic, rng))
        broken.push_back(id);
    }
  }
  for (const auto& id : broken) {
    if (machines_.at(id).status.state == ResourceState::Down) continue;
    if (auto r = running_.find(id); r != running_.end()) {
      const EntryId uid = r->second.uid;
      running_.erase(r);
      plan_.mark_done(uid);
      damage(plan_.entry(uid).product, out);
    }
    break_down(id, out);
  }
}

void World::dispatch(std::vector<SimEvent>& out) {
  for (const auto& id : plan_.resources()) {
    if (running_.contains(id)) continue;
    auto m = machines_.find(id);
    if (m != machines_.end() && m->second.status.state == ResourceState::Down) continue;

    std::optional<EntryId> next;
    for (EntryId uid : plan_.timeline(id)) {
      if (!plan_.started(uid)) {
        next = uid;
        break;
      }
    }
    if (!next) continue;
    const ScheduledEvent e = plan_.entry(*next);
    if (e.start > now_) continue;
    if (auto pred = plan_.predecessor(*next); pred && !plan_.done(*pred)) continue;

    if (m != machines_.end()) {
      auto rng = stream(1, index_.at(id), epoch_[id],
                        static_cast<std::uint32_t>(m->second.status.op_count));
      if (sample_breakdown(m->second, CheckContext::OperationStart, scenario_.stochastic, rng)) {
        damage(e.product, out);
        break_down(id, out);
        continue;
      }
      auto op_rng = stream(4, static_cast<std::uint32_t>(e.product), ops_[e.product]++);
      const Tick dur = sample_duration(registry_.at(id).cost(e.event.id),
                                       scenario_.stochastic.sigma_frac, op_rng);
      plan_.mark_started(*next, now_, now_ + dur);
      m->second.status.state = ResourceState::Up;
    } else {
      plan_.mark_started(*next, now_, now_ + e.duration());
    }
    const ScheduledEvent& started = plan_.entry(*next);
    running_[id] = {*next, started.end};
    out.push_back({now_, SimEventKind::Start, id, e.product});
    if (started.start != e.start || started.end != e.end) plan_.settle(scenario_.delta);
  }
}

std::vector<SimEvent> World::step() {
  std::vector<SimEvent> out;
  finish_operations(out);
  repair_machines(out);
  idle_checkpoints(out);
  dispatch(out);
  ++now_;
  return out;
}

TrialMetrics World::metrics() const {
  TrialMetrics t;
  t.seed = seed_;
  t.mode = config_.mode;
  t.risk_enabled = config_.risk_enabled;
  t.products = release_.size();
  t.completed = exits_.size();
  t.damaged = damaged_.size();
  t.in_flight = t.products - t.completed - t.damaged;
  t.broken_machines = broken_;
  t.disruptions = disruptions_;
  t.repairs = log_.size();
  t.rescheduled_processes = rescheduled_;
  t.total_processes = total_processes_;
  t.communications = communications_;
  t.escalations = escalations_;
  t.utilization = utilization_;
  t.horizon_exceeded = t.in_flight > 0;
  t.wall_ms = wall_ms_;
  double sum = 0.0;
  for (const auto& [p, exit] : exits_) {
    const Tick ct = exit - release_.at(p);
    t.cycle_times[p] = ct;
    sum += static_cast<double>(ct);
    t.max_cycle_time = std::max(t.max_cycle_time, ct);
    t.makespan = std::max(t.makespan, exit);
  }
  if (!exits_.empty()) t.mean_cycle_time = sum / static_cast<double>(exits_.size());
  double risk_sum = 0.0;
  std::size_t risk_n = 0;
  for (const auto& r : log_) {
    if (r.outcome == "dropped") continue;
    if (r.outcome == "deferred") ++t.deferred;
    t.peak_risk = std::max(t.peak_risk, r.risk);
    risk_sum += r.risk;
    ++risk_n;
  }
  if (risk_n > 0) t.avg_risk = risk_sum / static_cast<double>(risk_n);
  t.repair_log = log_;
  t.violations = violations_;
  if (config_.trace_messages) {
    std::ostringstream os;
    bus_.dump(os);
    t.message_trace = os.str();
  }
  return t;
}

TrialMetrics run_trial(const Scenario& scenario, const InitialSchedule& initial,
                       const SimConfig& config, std::uint64_t seed) {
  World world(scenario, initial, config, seed);
  while (!world.finished()) world.step();
  return world.metrics();
}

TrialMetrics run_trial(const Scenario& scenario, const SimConfig& config, std::uint64_t seed) {
  const auto registry = scenario.registry();
  const auto initial = generate_initial_schedule(scenario, registry, config.max_hops);
  return run_trial(scenario, initial, config, seed);
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("override " + key + " needs a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != static_cast<double>(static_cast<long long>(d)))
    throw ConfigError("override " + key + " needs an integer, got '" + v + "'");
  return static_cast<long long>(d);
}

void need(bool ok, const std::string& key) {
  if (!ok) throw ConfigError("override " + key + " is out of range");
}

}  // namespace

void apply_override(Scenario& scenario, SimConfig& config, const std::string& key,
                    const std::string& value) {
  auto& st = scenario.stochastic;
  if (key == "delta") {
    scenario.delta = to_int(key, value);
    need(scenario.delta >= 0, key);
  } else if (key == "sigma_frac") {
    st.sigma_frac = to_double(key, value);
    need(st.sigma_frac >= 0.0 && st.sigma_frac <= 0.3, key);
  } else if (key == "hazard_scale") {
    st.hazard_scale = to_double(key, value);
    need(st.hazard_scale >= 0.0, key);
  } else if (key == "max_hops") {
    config.max_hops = static_cast<int>(to_int(key, value));
    need(config.max_hops >= 1 && config.max_hops <= 4, key);
  } else if (key == "n_samples") {
    config.n_samples = static_cast<int>(to_int(key, value));
    need(config.n_samples >= 1, key);
  } else if (key == "w1" || key == "w2") {
    const double w = to_double(key, value);
    need(w >= 0.0 && w <= 1.0, key);
    config.weights.w1 = key == "w1" ? w : 1.0 - w;
    config.weights.w2 = 1.0 - config.weights.w1;
  } else if (key == "W") {
    config.weights.W = to_double(key, value);
    need(config.weights.W >= 0.0, key);
  } else if (key == "beta") {
    config.beta = to_double(key, value);
    need(config.beta >= 0.0, key);
  } else if (key == "w_s") {
    config.priority.w_s = to_double(key, value);
  } else if (key == "w_d") {
    config.priority.w_d = to_double(key, value);
  } else if (key == "horizon") {
    scenario.horizon = to_int(key, value);
    need(scenario.horizon > 0, key);
  } else if (key == "products") {
    scenario.arrivals.count = static_cast<int>(to_int(key, value));
    need(scenario.arrivals.count >= 1, key);
  } else if (key == "transport_time") {
    scenario.transport_time = to_int(key, value);
    need(scenario.transport_time >= 1, key);
  } else {
    throw ConfigError("unknown override " + key);
  }
}

}  // namespace resched
