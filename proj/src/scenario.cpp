#include "resched/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace resched {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

bool is_buffer(const std::string& s) { return s == kEntry || s == kExit; }

}  // namespace

std::string ProductType::composition(std::size_t k) const {
  if (k == 0) return "raw";
  std::string out = route.at(0);
  for (std::size_t i = 1; i < k; ++i) out += "+" + route.at(i);
  return out;
}

const ProductType& Scenario::type(const std::string& n) const {
  for (const auto& t : types)
    if (t.name == n) return t;
  throw ConfigError("unknown product type " + n);
}

std::vector<ProductRelease> Scenario::releases() const {
  std::vector<ProductRelease> out;
  if (arrivals.pattern.empty()) throw ConfigError("arrival pattern is empty");
  for (int i = 0; i < arrivals.count; ++i) {
    const auto& t = arrivals.pattern[static_cast<std::size_t>(i) % arrivals.pattern.size()];
    out.push_back({i + 1, t, arrivals.start + arrivals.spacing * i});
  }
  return out;
}

std::vector<std::string> Scenario::robot_locations(const RobotSpec& r) const {
  std::set<std::string> locs;
  for (const auto& c : r.reach) {
    if (is_buffer(c)) {
      locs.insert(c);
      continue;
    }
    for (const auto& m : machines)
      if (m.cell == c || m.id == c) locs.insert(m.id);
  }
  return {locs.begin(), locs.end()};
}

Registry Scenario::registry() const {
  Registry reg;
  for (const auto& m : machines) {
    CapabilityModel cm;
    cm.resource = m.id;
    cm.klass = ResourceClass::Transformation;
    cm.locations = {m.id};
    for (const auto& [p, t] : m.process_times) {
      cm.events.insert(p);
      cm.nominal_cost[p] = t;
      cm.attributes[p] = {{"workspace", m.workspace}};
    }
    reg.add(std::move(cm));
  }
  for (const auto& r : robots) {
    CapabilityModel cm;
    cm.resource = r.id;
    cm.klass = ResourceClass::Transportation;
    const auto locs = robot_locations(r);
    cm.locations.insert(locs.begin(), locs.end());
    for (const auto& a : locs) {
      for (const auto& b : locs) {
        if (a == b) continue;
        cm.events.insert(transport_id(a, b));
        cm.nominal_cost[transport_id(a, b)] = transport_time;
      }
    }
    reg.add(std::move(cm));
  }
  return reg;
}

void Scenario::check() const {
  if (delta < 0) throw ConfigError("delta must be non-negative");
  if (transport_time <= 0) throw ConfigError("transport time must be positive");
  if (arrivals.count < 0 || arrivals.spacing < 0) throw ConfigError("bad arrivals");
  if (stochastic.sigma_frac < 0.0 || stochastic.hazard_scale < 0.0)
    throw ConfigError("stochastic parameters must be non-negative");
  if (stochastic.nominal_ops_lo <= 0 || stochastic.nominal_ops_hi < stochastic.nominal_ops_lo)
    throw ConfigError("nominal operations range must be positive");
  for (const auto& p : arrivals.pattern) type(p);
  for (const auto& t : types) {
    t.requirements.check();
    for (const auto& step : t.route) {
      const bool hosted = std::any_of(machines.begin(), machines.end(), [&](const MachineSpec& m) {
        return m.process_times.contains(step);
      });
      if (!hosted)
        throw InfeasibleScenario("route step " + step + " of " + t.name + " has no machine");
    }
  }
  for (const auto& m : machines) {
    const bool reached = std::any_of(robots.begin(), robots.end(), [&](const RobotSpec& r) {
      auto locs = robot_locations(r);
      return std::find(locs.begin(), locs.end(), m.id) != locs.end();
    });
    if (!reached) throw ConfigError("machine " + m.id + " is not reachable by any robot");
  }
}

Scenario build_minifab(std::uint64_t seed) {
  Scenario s;
  s.name = "minifab";
  s.seed = seed;

  struct Row {
    const char* id;
    const char* cell;
    const char* ws;
    std::vector<std::string> processes;
  };
  const std::vector<Row> rows = {
      {"M01", "A", "large", {"P1"}},       {"M02", "A", "large", {"P1"}},
      {"M03", "A", "small", {"P1"}},       {"M04", "A", "large", {"P1", "P2"}},
      {"M05", "A", "small", {"P1", "P2"}}, {"M06", "B", "small", {"P2"}},
      {"M07", "B", "large", {"P2", "P3"}}, {"M08", "B", "large", {"P3"}},
      {"M09", "B", "large", {"P3"}},       {"M10", "B", "small", {"P3"}},
      {"M11", "C", "large", {"P3", "P4"}}, {"M12", "C", "large", {"P4"}},
      {"M13", "C", "large", {"P4", "P5"}}, {"M14", "C", "large", {"P5"}},
      {"M15", "C", "large", {"P5"}},       {"M16", "D", "small", {"P6"}},
      {"M17", "D", "small", {"P6"}},       {"M18", "D", "large", {"P3", "P6"}},
      {"M19", "D", "large", {"P5", "P6"}}, {"M20", "D", "large", {"P4"}},
  };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Tick> cost(110, 200);
  for (const auto& r : rows) {
    MachineSpec m{r.id, r.cell, r.ws, {}};
    for (const auto& p : r.processes) m.process_times[p] = cost(rng);
    s.machines.push_back(std::move(m));
  }
  s.robots = {
      {"R1", {kEntry, "A"}},      {"R2", {"A", "B"}},           {"R3", {"B", "C"}},
      {"R4", {"C", "D", kExit}},  {"R5", {kEntry, "A", "B"}},   {"R6", {"B", "C", "D", kExit}},
  };

  ProductType small{"S", {"P1", "P2", "P3", "P6"}, {}};
  ProductType large{"L", {"P1", "P3", "P4", "P5"}, {}};
  large.requirements.hard.push_back({"workspace", Comparison::Equal, std::string("large")});
  s.types = {small, large};
  return s;
}

namespace {

json value_to_json(const AttributeValue& v) {
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  return std::get<double>(v);
}

AttributeValue value_from_json(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.get<double>();
  throw ConfigError("attribute values are strings or numbers");
}

std::string cmp_to_string(Comparison c) {
  switch (c) {
    case Comparison::Equal: return "==";
    case Comparison::AtMost: return "<=";
    case Comparison::AtLeast: return ">=";
  }
  return "==";
}

Comparison cmp_from_string(const std::string& s) {
  if (s == "==") return Comparison::Equal;
  if (s == "<=") return Comparison::AtMost;
  if (s == ">=") return Comparison::AtLeast;
  throw ConfigError("unknown comparison " + s);
}

json requirement_to_json(const AttributeRequirement& r) {
  return {{"name", r.name}, {"cmp", cmp_to_string(r.cmp)}, {"value", value_to_json(r.value)}};
}

AttributeRequirement requirement_from_json(const json& j) {
  return {j.at("name").get<std::string>(), cmp_from_string(j.value("cmp", "==")),
          value_from_json(j.at("value"))};
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = s.name;
  j["seed"] = s.seed;
  j["delta"] = s.delta;
  j["transport_time"] = s.transport_time;
  j["horizon"] = s.horizon;
  j["due_offset"] = s.due_offset;
  for (const auto& m : s.machines)
    j["machines"].push_back({{"id", m.id}, {"cell", m.cell}, {"workspace", m.workspace},
                             {"processes", m.process_times}});
  for (const auto& r : s.robots) j["robots"].push_back({{"id", r.id}, {"reach", r.reach}});
  for (const auto& t : s.types) {
    json tj{{"name", t.name}, {"route", t.route}, {"hard", json::array()}, {"soft", json::array()}};
    for (const auto& h : t.requirements.hard) tj["hard"].push_back(requirement_to_json(h));
    for (const auto& sr : t.requirements.soft) {
      auto sj = requirement_to_json(sr.attribute);
      sj["tolerance"] = sr.tolerance;
      sj["penalty"] = sr.penalty_per_unit;
      tj["soft"].push_back(sj);
    }
    j["product_types"].push_back(tj);
  }
  j["arrivals"] = {{"count", s.arrivals.count},
                   {"start", s.arrivals.start},
                   {"spacing", s.arrivals.spacing},
                   {"pattern", s.arrivals.pattern}};
  const auto& st = s.stochastic;
  j["stochastic"] = {{"hazard", {st.hazard_lo, st.hazard_hi}},
                     {"hazard_scale", st.hazard_scale},
                     {"max_p", st.max_p},
                     {"idle_check", st.idle_check},
                     {"idle_factor", st.idle_factor},
                     {"mttr", {st.mttr_lo, st.mttr_hi}},
                     {"sigma_frac", st.sigma_frac},
                     {"nominal_ops", {st.nominal_ops_lo, st.nominal_ops_hi}}};
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion)
      throw ConfigError("unsupported schema version " + std::to_string(version));
    Scenario s;
    s.name = j.value("name", "custom");
    s.seed = j.value("seed", std::uint64_t{1});
    s.delta = j.value("delta", s.delta);
    s.transport_time = j.value("transport_time", s.transport_time);
    s.horizon = j.value("horizon", s.horizon);
    s.due_offset = j.value("due_offset", s.due_offset);
    for (const auto& m : j.at("machines"))
      s.machines.push_back({m.at("id").get<std::string>(), m.value("cell", ""),
                            m.value("workspace", "small"),
                            m.at("processes").get<std::map<std::string, Tick>>()});
    for (const auto& r : j.at("robots"))
      s.robots.push_back({r.at("id").get<std::string>(),
                          r.at("reach").get<std::vector<std::string>>()});
    for (const auto& t : j.at("product_types")) {
      ProductType pt{t.at("name").get<std::string>(),
                     t.at("route").get<std::vector<std::string>>(), {}};
      for (const auto& h : t.value("hard", json::array()))
        pt.requirements.hard.push_back(requirement_from_json(h));
      for (const auto& sr : t.value("soft", json::array()))
        pt.requirements.soft.push_back({requirement_from_json(sr), sr.value("tolerance", 0.0),
                                        sr.value("penalty", 0.0)});
      s.types.push_back(std::move(pt));
    }
    if (j.contains("arrivals")) {
      const auto& a = j["arrivals"];
      s.arrivals.count = a.value("count", s.arrivals.count);
      s.arrivals.start = a.value("start", s.arrivals.start);
      s.arrivals.spacing = a.value("spacing", s.arrivals.spacing);
      s.arrivals.pattern = a.value("pattern", s.arrivals.pattern);
    }
    if (j.contains("stochastic")) {
      const auto& st = j["stochastic"];
      auto& p = s.stochastic;
      if (st.contains("hazard")) {
        p.hazard_lo = st["hazard"].at(0).get<double>();
        p.hazard_hi = st["hazard"].at(1).get<double>();
      }
      p.hazard_scale = st.value("hazard_scale", p.hazard_scale);
      p.max_p = st.value("max_p", p.max_p);
      p.idle_check = st.value("idle_check", p.idle_check);
      p.idle_factor = st.value("idle_factor", p.idle_factor);
      if (st.contains("mttr")) {
        p.mttr_lo = st["mttr"].at(0).get<Tick>();
        p.mttr_hi = st["mttr"].at(1).get<Tick>();
      }
      p.sigma_frac = st.value("sigma_frac", p.sigma_frac);
      if (st.contains("nominal_ops")) {
        p.nominal_ops_lo = st["nominal_ops"].at(0).get<int>();
        p.nominal_ops_hi = st["nominal_ops"].at(1).get<int>();
      }
    }
    s.check();
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario file: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path_or_builtin) {
  if (path_or_builtin == "minifab") return build_minifab();
  std::ifstream in(path_or_builtin);
  if (!in) throw ConfigError("cannot open scenario " + path_or_builtin);
  std::ostringstream os;
  os << in.rdbuf();
  return scenario_from_json(os.str());
}

}  // namespace resched
