#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "resched/capability.hpp"

namespace resched {

struct MachineSpec {
  ResourceId id;
  std::string cell;
  std::string workspace;  // "large" or "small"
  std::map<std::string, Tick> process_times;
};

/// A robot reaches every machine of the listed cells plus any listed buffer.
struct RobotSpec {
  ResourceId id;
  std::vector<std::string> reach;
};

struct ProductType {
  std::string name;
  std::vector<std::string> route;
  Requirements requirements;

  /// Composition after the first `k` route steps: "raw", "P1", "P1+P3", ...
  std::string composition(std::size_t k) const;
};

struct Arrivals {
  int count = 100;
  Tick start = 10;
  Tick spacing = 30;
  std::vector<std::string> pattern{"S", "L"};
};

struct StochasticParams {
  double hazard_lo = 0.033;
  double hazard_hi = 0.10;
  double hazard_scale = 1.0;  // 0 disables breakdowns
  double max_p = 0.5;
  Tick idle_check = 100;
  double idle_factor = 0.05;
  Tick mttr_lo = 1000;
  Tick mttr_hi = 1500;
  double sigma_frac = 0.05;
  int nominal_ops_lo = 20;
  int nominal_ops_hi = 40;
};

struct ProductRelease {
  ProductId id = 0;
  std::string type;
  Tick release = 0;
};

inline const std::string kEntry = "Entry";
inline const std::string kExit = "Exit";

struct Scenario {
  std::string name = "custom";
  std::vector<MachineSpec> machines;
  std::vector<RobotSpec> robots;
  std::vector<ProductType> types;
  Arrivals arrivals;
  StochasticParams stochastic;
  Tick delta = 10;
  Tick transport_time = 20;
  Tick horizon = 50000;
  Tick due_offset = 2000;
  std::uint64_t seed = 1;

  const ProductType& type(const std::string& name) const;
  std::vector<ProductRelease> releases() const;
  /// Locations a robot reaches.
  std::vector<std::string> robot_locations(const RobotSpec& r) const;
  Registry registry() const;
  /// Throws ConfigError when a route step has no machine or a machine no robot.
  void check() const;
};

/// The 20-machine, 6-robot case-study factory. Process times are drawn
/// from [110, 200] with `seed`.
Scenario build_minifab(std::uint64_t seed = 1);

std::string scenario_to_json(const Scenario& s);
/// Throws ConfigError on malformed input or an unsupported schema version.
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path_or_builtin);

}  // namespace resched
