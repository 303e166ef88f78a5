#include "resched/generator.hpp"

#include <algorithm>
#include <functional>

#include "resched/protocol.hpp"

namespace resched {

namespace {

struct Link {
  EventSpec event;
  ResourceId resource;
  Tick offset = 0;
  Tick duration = 0;
};

class Occupancy {
 public:
  Occupancy(Tick delta, const Registry& registry) : delta_(delta), registry_(registry) {}

  /// Earliest start >= s where [start, start + dur) keeps the gap.
  Tick fit(const ResourceId& r, Tick s, Tick dur) const {
    const Tick gap = gap_of(r);
    auto it = busy_.find(r);
    if (it == busy_.end()) return s;
    for (const auto& [a, b] : it->second) {
      if (s + dur + gap <= a) return s;
      s = std::max(s, b + gap);
    }
    return s;
  }

  void take(const ResourceId& r, Tick a, Tick b) {
    auto& v = busy_[r];
    v.insert(std::upper_bound(v.begin(), v.end(), std::pair{a, b}), {a, b});
    load_[r] += b - a;
  }

  Tick load(const ResourceId& r) const {
    auto it = load_.find(r);
    return it == load_.end() ? 0 : it->second;
  }

 private:
  Tick gap_of(const ResourceId& r) const {
    return registry_.at(r).klass == ResourceClass::Transformation ? delta_ : 0;
  }

  Tick delta_;
  const Registry& registry_;
  std::map<ResourceId, std::vector<std::pair<Tick, Tick>>> busy_;
  std::map<ResourceId, Tick> load_;
};

Tick earliest_offset(const std::vector<Link>& chain, const Occupancy& occ, Tick release) {
  Tick t = release;
  for (bool moved = true; moved;) {
    moved = false;
    for (const auto& l : chain) {
      const Tick s = occ.fit(l.resource, t + l.offset, l.duration);
      if (s != t + l.offset) {
        t = s - l.offset;
        moved = true;
        break;
      }
    }
  }
  return t;
}

Path lightest(const std::vector<Path>& paths, const Occupancy& occ) {
  return *std::min_element(paths.begin(), paths.end(), [&](const Path& a, const Path& b) {
    auto load = [&](const Path& p) {
      Tick sum = 0;
      for (const auto& h : p) sum += occ.load(h.robot);
      return sum;
    };
    return load(a) < load(b);
  });
}

}  // namespace

InitialSchedule generate_initial_schedule(const Scenario& scenario, const Registry& registry,
                                          int max_hops) {
  constexpr std::size_t kHostsPerStep = 2;
  InitialSchedule out;
  Occupancy occ(scenario.delta, registry);
  auto any = [](const ResourceId&) { return true; };
  std::map<std::pair<std::string, std::string>, std::vector<Path>> path_cache;
  auto paths_between = [&](const std::string& from, const std::string& to) -> const auto& {
    auto key = std::pair{from, to};
    auto it = path_cache.find(key);
    if (it == path_cache.end())
      it = path_cache.emplace(key, transport_paths(from, to, registry, any, max_hops)).first;
    return it->second;
  };

  for (const auto& [id, model] : registry.all())
    out.plan.add_resource(id, model.klass == ResourceClass::Transformation);

  for (const auto& rel : scenario.releases()) {
    const ProductType& type = scenario.type(rel.type);
    const ProductState start{kEntry, type.composition(0)};
    out.plan.add_product(rel.id, start, rel.release);

    // Eligible hosts per route step, least loaded first.
    std::vector<std::vector<ResourceId>> hosts;
    for (const auto& step : type.route) {
      std::vector<ResourceId> eligible;
      for (const auto& [id, model] : registry.all())
        if (model.klass == ResourceClass::Transformation &&
            match_requirements(step, type.requirements, model).accepted)
          eligible.push_back(id);
      if (eligible.empty())
        throw InfeasibleScenario("no machine can perform " + step + " for product type " +
                                 type.name);
      std::stable_sort(eligible.begin(), eligible.end(), [&](const auto& a, const auto& b) {
        return occ.load(a) < occ.load(b);
      });
      if (eligible.size() > kHostsPerStep) eligible.resize(kHostsPerStep);
      hosts.push_back(std::move(eligible));
    }

    std::optional<std::vector<Link>> best;
    Tick best_t = 0, best_end = 0;
    std::vector<ResourceId> pick;
    std::function<void(std::size_t)> choose = [&](std::size_t k) {
      if (k == hosts.size()) {
        std::vector<Link> chain;
        Tick offset = 0;
        std::string loc = kEntry;
        auto leg = [&](const std::string& to) {
          const auto& paths = paths_between(loc, to);
          if (paths.empty())
            throw InfeasibleScenario("no robot path from " + loc + " to " + to);
          for (const auto& hop : lightest(paths, occ)) {
            chain.push_back({hop.event, hop.robot, offset, scenario.transport_time});
            offset += scenario.transport_time;
          }
          loc = to;
        };
        for (std::size_t i = 0; i < pick.size(); ++i) {
          leg(pick[i]);
          const Tick dur = registry.at(pick[i]).cost(type.route[i]);
          chain.push_back({EventSpec::transform(type.route[i], pick[i], type.composition(i),
                                                type.composition(i + 1)),
                           pick[i], offset, dur});
          offset += dur;
        }
        leg(kExit);
        const Tick t = earliest_offset(chain, occ, rel.release);
        if (!best || t + offset < best_end) {
          best = chain;
          best_t = t;
          best_end = t + offset;
        }
        return;
      }
      for (const auto& h : hosts[k]) {
        if (!pick.empty() && pick.back() == h) continue;
        pick.push_back(h);
        choose(k + 1);
        pick.pop_back();
      }
    };
    choose(0);
    if (!best) throw InfeasibleScenario("product " + std::to_string(rel.id) + " cannot be routed");

    for (const auto& l : *best) {
      ScheduledEvent e;
      e.event = l.event;
      e.product = rel.id;
      e.resource = l.resource;
      e.start = best_t + l.offset;
      e.end = e.start + l.duration;
      occ.take(l.resource, e.start, e.end);
      out.plan.append(std::move(e));
      out.makespan = std::max(out.makespan, best_t + l.offset + l.duration);
    }
  }

  Tick busy = 0, machine_busy = 0;
  std::size_t machines = 0;
  for (const auto& [id, model] : registry.all()) {
    const bool machine = model.klass == ResourceClass::Transformation;
    machines += machine;
    for (EntryId uid : out.plan.timeline(id)) {
      const Tick d = out.plan.entry(uid).duration();
      busy += d;
      if (machine) machine_busy += d;
    }
  }
  if (out.makespan > 0) {
    out.utilization = static_cast<double>(busy) /
                      (static_cast<double>(registry.size()) * static_cast<double>(out.makespan));
    if (machines > 0)
      out.machine_utilization = static_cast<double>(machine_busy) /
                                (static_cast<double>(machines) * static_cast<double>(out.makespan));
  }
  return out;
}

}  // namespace resched
