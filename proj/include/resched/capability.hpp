#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "resched/schedule.hpp"

namespace resched {

enum class ResourceClass { Transformation, Transportation };

/// Symbols compare by equality, numbers by the requirement's polarity.
using AttributeValue = std::variant<std::string, double>;

struct Attribute {
  std::string name;
  AttributeValue value;
};

/// What a resource can do: reachable locations, events, nominal event
/// times and per-event physical attributes.
struct CapabilityModel {
  ResourceId resource;
  ResourceClass klass = ResourceClass::Transformation;
  std::set<std::string> locations;
  std::set<std::string> events;
  std::map<std::string, Tick> nominal_cost;
  std::map<std::string, std::vector<Attribute>> attributes;

  bool has_event(const std::string& id) const { return events.contains(id); }
  Tick cost(const std::string& id) const;
  const Attribute* attribute(const std::string& event, const std::string& name) const;
  /// The single location of a transformation resource.
  const std::string& home() const;

  /// Throws ConfigError when an event lacks a positive cost or a transport
  /// event leaves the reachable locations.
  void check() const;
};

enum class ResourceState { Idle, Up, Down };

std::string to_string(ResourceState s);

struct ResourceStatus {
  ResourceState state = ResourceState::Idle;
  std::optional<Tick> down_until;
  int op_count = 0;     // operations since the last repair
  int nominal_ops = 1;  // nominal operations between breakdowns

  void break_down(Tick until);
  void repair();
};

enum class Comparison { Equal, AtMost, AtLeast };

struct AttributeRequirement {
  std::string name;
  Comparison cmp = Comparison::Equal;
  AttributeValue value;
};

struct SoftRequirement {
  AttributeRequirement attribute;
  double tolerance = 0.0;
  double penalty_per_unit = 0.0;
};

struct Requirements {
  std::vector<AttributeRequirement> hard;
  std::vector<SoftRequirement> soft;

  /// Throws ConfigError when an attribute is both hard and soft.
  void check() const;
};

struct MatchResult {
  bool accepted = false;
  double penalty = 0.0;
};

/// Shared read-only capability directory.
class Registry {
 public:
  void add(CapabilityModel model);
  const CapabilityModel& at(const ResourceId& id) const;
  bool contains(const ResourceId& id) const { return models_.contains(id); }
  const std::map<ResourceId, CapabilityModel>& all() const { return models_; }
  std::size_t size() const { return models_.size(); }
  /// Removes or restores an event in a resource's model (tool changes).
  void set_event_enabled(const ResourceId& id, const std::string& event, bool enabled);

 private:
  std::map<ResourceId, CapabilityModel> models_;
  std::map<ResourceId, std::set<std::string>> disabled_;
};

/// Every other resource whose model contains `event`.
std::set<ResourceId> clustering_ras(const std::string& event, const ResourceId& self,
                                    const Registry& registry);

/// Resources performing the entries right before and after `entry` in its
/// product schedule. Throws EventNotFound.
std::set<ResourceId> sequential_ras(const ScheduledEvent& entry,
                                    const ProductSchedule& product_schedule);

/// Every other resource that shares `location`. For a transformation
/// resource only transportation resources qualify.
std::set<ResourceId> collaborative_ras(const std::string& location, const ResourceId& self,
                                       const Registry& registry);

/// Hard requirements must hold; soft ones may be missed by up to their
/// tolerance at a linear penalty.
MatchResult match_requirements(const std::string& event, const Requirements& req,
                               const CapabilityModel& candidate);

}  // namespace resched
