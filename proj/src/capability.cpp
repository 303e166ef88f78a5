#include "resched/capability.hpp"

#include <algorithm>
#include <cmath>

namespace resched {

Tick CapabilityModel::cost(const std::string& id) const {
  auto it = nominal_cost.find(id);
  if (it == nominal_cost.end()) throw EventNotFound(resource + " cannot perform " + id);
  return it->second;
}

const Attribute* CapabilityModel::attribute(const std::string& event,
                                            const std::string& name) const {
  auto it = attributes.find(event);
  if (it == attributes.end()) return nullptr;
  for (const auto& a : it->second)
    if (a.name == name) return &a;
  return nullptr;
}

const std::string& CapabilityModel::home() const {
  if (locations.empty()) throw ConfigError(resource + " has no location");
  return *locations.begin();
}

void CapabilityModel::check() const {
  for (const auto& ev : events) {
    auto it = nominal_cost.find(ev);
    if (it == nominal_cost.end() || it->second <= 0)
      throw ConfigError(resource + ": event " + ev + " needs a positive nominal cost");
  }
  if (klass == ResourceClass::Transformation && locations.size() != 1)
    throw ConfigError(resource + ": a transformation resource has exactly one location");
  if (klass == ResourceClass::Transportation) {
    for (const auto& ev : events) {
      auto sep = ev.find('>');
      if (ev.rfind("move:", 0) != 0 || sep == std::string::npos)
        throw ConfigError(resource + ": malformed transport event " + ev);
      if (!locations.contains(ev.substr(5, sep - 5)) || !locations.contains(ev.substr(sep + 1)))
        throw ConfigError(resource + ": " + ev + " leaves its reachable locations");
    }
  }
}

std::string to_string(ResourceState s) {
  switch (s) {
    case ResourceState::Idle: return "Idle";
    case ResourceState::Up: return "Up";
    case ResourceState::Down: return "Down";
  }
  return "?";
}

void ResourceStatus::break_down(Tick until) {
  state = ResourceState::Down;
  down_until = until;
}

void ResourceStatus::repair() {
  state = ResourceState::Idle;
  down_until.reset();
  op_count = 0;
}

void Requirements::check() const {
  for (const auto& h : hard)
    for (const auto& s : soft)
      if (h.name == s.attribute.name)
        throw ConfigError("attribute " + h.name + " is both a hard and a soft requirement");
}

void Registry::add(CapabilityModel model) {
  model.check();
  auto id = model.resource;
  models_[id] = std::move(model);
}

const CapabilityModel& Registry::at(const ResourceId& id) const {
  auto it = models_.find(id);
  if (it == models_.end()) throw EventNotFound("no resource " + id);
  return it->second;
}

void Registry::set_event_enabled(const ResourceId& id, const std::string& event,
                                 bool enabled) {
  auto& model = models_.at(id);
  if (enabled) {
    if (disabled_[id].erase(event)) model.events.insert(event);
  } else if (model.events.erase(event)) {
    disabled_[id].insert(event);
  }
}

std::set<ResourceId> clustering_ras(const std::string& event, const ResourceId& self,
                                    const Registry& registry) {
  std::set<ResourceId> out;
  for (const auto& [id, model] : registry.all())
    if (id != self && model.has_event(event)) out.insert(id);
  return out;
}

std::set<ResourceId> sequential_ras(const ScheduledEvent& entry,
                                    const ProductSchedule& product_schedule) {
  const auto& es = product_schedule.entries;
  auto it = std::find_if(es.begin(), es.end(),
                         [&](const ScheduledEvent& e) { return e.uid == entry.uid; });
  if (it == es.end())
    throw EventNotFound("entry " + std::to_string(entry.uid) + " is not in product " +
                        std::to_string(product_schedule.product));
  std::set<ResourceId> out;
  if (it != es.begin()) out.insert(std::prev(it)->resource);
  if (std::next(it) != es.end()) out.insert(std::next(it)->resource);
  return out;
}

std::set<ResourceId> collaborative_ras(const std::string& location, const ResourceId& self,
                                       const Registry& registry) {
  const bool self_transforms = registry.contains(self) &&
                               registry.at(self).klass == ResourceClass::Transformation;
  std::set<ResourceId> out;
  for (const auto& [id, model] : registry.all()) {
    if (id == self || !model.locations.contains(location)) continue;
    if (self_transforms && model.klass == ResourceClass::Transformation) continue;
    out.insert(id);
  }
  return out;
}

namespace {

// How far `have` misses `want`; 0 when satisfied, nullopt when incomparable.
std::optional<double> shortfall(const AttributeRequirement& want, const AttributeValue& have) {
  if (std::holds_alternative<std::string>(want.value)) {
    if (!std::holds_alternative<std::string>(have)) return std::nullopt;
    return std::get<std::string>(have) == std::get<std::string>(want.value) ? 0.0 : 1.0;
  }
  if (!std::holds_alternative<double>(have)) return std::nullopt;
  const double w = std::get<double>(want.value);
  const double h = std::get<double>(have);
  switch (want.cmp) {
    case Comparison::AtMost: return std::max(0.0, h - w);
    case Comparison::AtLeast: return std::max(0.0, w - h);
    case Comparison::Equal: return std::abs(h - w);
  }
  return std::nullopt;
}

}  // namespace

MatchResult match_requirements(const std::string& event, const Requirements& req,
                               const CapabilityModel& candidate) {
  if (!candidate.has_event(event)) return {};
  for (const auto& h : req.hard) {
    const Attribute* a = candidate.attribute(event, h.name);
    if (!a) return {};
    auto miss = shortfall(h, a->value);
    if (!miss || *miss > 0.0) return {};
  }
  double penalty = 0.0;
  for (const auto& s : req.soft) {
    const Attribute* a = candidate.attribute(event, s.attribute.name);
    if (!a) return {};
    auto miss = shortfall(s.attribute, a->value);
    if (!miss || *miss > s.tolerance) return {};
    penalty += *miss * s.penalty_per_unit;
  }
  return {true, penalty};
}

}  // namespace resched
