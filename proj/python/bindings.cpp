#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resched/generator.hpp"
#include "resched/report.hpp"
#include "resched/risk.hpp"
#include "resched/sim.hpp"

namespace py = pybind11;
using namespace resched;

namespace {

std::vector<BusySpan> to_spans(const std::vector<std::tuple<Tick, Tick, Tick>>& busy) {
  std::vector<BusySpan> out;
  for (const auto& [s, e, latest] : busy) out.push_back({s, e, latest});
  return out;
}

Scenario scenario_arg(const std::string& s) {
  return s.find('{') == std::string::npos ? load_scenario(s) : scenario_from_json(s);
}

py::dict metrics_dict(const TrialMetrics& t) {
  const CsvTable row = parse_csv(metrics_csv({t}));
  py::dict d;
  for (std::size_t i = 0; i < row.header.size(); ++i) {
    const std::string& v = row.rows.front()[i];
    if (row.header[i] == "mode" || row.header[i] == "risk")
      d[py::str(row.header[i])] = v;
    else
      d[py::str(row.header[i])] = std::stod(v);
  }
  d["cycle_times"] = t.cycle_times;
  d["violations"] = t.violations;
  d["wall_ms"] = t.wall_ms;
  return d;
}

std::vector<TrialMetrics> run_batch(const std::string& scenario, const std::string& mode,
                                    bool risk, int trials, std::uint64_t seed,
                                    const std::map<std::string, std::string>& overrides,
                                    bool validate) {
  if (trials < 1) throw ConfigError("trials must be at least 1");
  Scenario sc = scenario_arg(scenario);
  SimConfig config;
  config.mode = parse_mode(mode);
  config.risk_enabled = risk;
  config.validate_repairs = validate;
  for (const auto& [k, v] : overrides) apply_override(sc, config, k, v);
  const auto registry = sc.registry();
  const auto initial = generate_initial_schedule(sc, registry, config.max_hops);
  std::vector<TrialMetrics> out;
  for (int i = 0; i < trials; ++i)
    out.push_back(run_trial(sc, initial, config, seed + static_cast<std::uint64_t>(i)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Schedule repair after resource breakdowns";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<InfeasibleScenario>(m, "InfeasibleScenario", base);
  py::register_exception<NoFeasibleSlot>(m, "NoFeasibleSlot", base);
  py::register_exception<InapplicableEvent>(m, "InapplicableEvent", base);
  py::register_exception<InvalidNominalOps>(m, "InvalidNominalOps", base);

  m.attr("INFINITE") = kInfinite;

  m.def(
      "idle_intervals",
      [](const std::vector<std::tuple<Tick, Tick, Tick>>& busy, Tick horizon, Tick from) {
        std::vector<std::pair<Tick, Tick>> out;
        for (const auto& w : idle_intervals(to_spans(busy), horizon, from))
          out.push_back({w.lo, w.hi});
        return out;
      },
      py::arg("busy"), py::arg("horizon"), py::arg("start") = 0,
      "Idle windows between (start, end, latest_end) busy spans.");

  m.def(
      "earliest_start",
      [](const std::vector<std::tuple<Tick, Tick, Tick>>& busy, Tick t, Tick delta, Tick dur,
         Tick horizon) -> py::object {
        const auto spans = to_spans(busy);
        const auto idle = idle_intervals(spans, horizon, 0);
        const auto ins = try_earliest_start(idle, spans, t, delta, dur, horizon);
        if (!ins) return py::none();
        py::dict d;
        d["start"] = ins->start;
        d["t_max"] = ins->t_max;
        if (ins->shift)
          d["shift"] = py::make_tuple(ins->shift->index, ins->shift->from, ins->shift->to);
        else
          d["shift"] = py::none();
        return d;
      },
      py::arg("busy"), py::arg("t"), py::arg("delta"), py::arg("duration"),
      py::arg("horizon") = kInfinite,
      "Earliest insertion of an event, or None when no window admits it.");

  m.def(
      "breakdown_probability",
      [](int op_count, int nominal_ops) {
        ResourceStatus s;
        s.op_count = op_count;
        s.nominal_ops = nominal_ops;
        return breakdown_probability(s);
      },
      py::arg("op_count"), py::arg("nominal_ops"));

  m.def(
      "delay_risk_q",
      [](const std::vector<std::pair<Tick, Tick>>& samples) {
        std::vector<SlackSample> xs;
        for (const auto& [s, t] : samples) xs.push_back({s, t});
        return delay_risk_q(xs);
      },
      py::arg("samples"), "Q from (slack, t_max) pairs.");

  m.def(
      "minifab_json", [](std::uint64_t seed) { return scenario_to_json(build_minifab(seed)); },
      py::arg("seed") = 1);

  m.def(
      "initial_schedule",
      [](const std::string& scenario) {
        const Scenario sc = scenario_arg(scenario);
        const auto init = generate_initial_schedule(sc, sc.registry());
        const auto report = validate_production_schedule(
            init.plan.all_resource_schedules(), init.plan.all_product_schedules(), sc.delta);
        py::dict d;
        d["makespan"] = init.makespan;
        d["utilization"] = init.utilization;
        d["machine_utilization"] = init.machine_utilization;
        d["resources"] = init.plan.resources().size();
        d["violations"] = report.violations.size();
        return d;
      },
      py::arg("scenario") = "minifab");

  m.def(
      "run_trials",
      [](const std::string& scenario, const std::string& mode, bool risk, int trials,
         std::uint64_t seed, const std::map<std::string, std::string>& overrides, bool validate) {
        py::list out;
        for (const auto& t : run_batch(scenario, mode, risk, trials, seed, overrides, validate))
          out.append(metrics_dict(t));
        return out;
      },
      py::arg("scenario") = "minifab", py::arg("mode") = "distributed", py::arg("risk") = true,
      py::arg("trials") = 1, py::arg("seed") = 1,
      py::arg("overrides") = std::map<std::string, std::string>{}, py::arg("validate") = false,
      "Runs seeded trials and returns one metrics dict per trial.");

  m.def(
      "metrics_csv",
      [](const std::string& scenario, const std::string& mode, bool risk, int trials,
         std::uint64_t seed, const std::map<std::string, std::string>& overrides) {
        return metrics_csv(run_batch(scenario, mode, risk, trials, seed, overrides, false));
      },
      py::arg("scenario") = "minifab", py::arg("mode") = "distributed", py::arg("risk") = true,
      py::arg("trials") = 1, py::arg("seed") = 1,
      py::arg("overrides") = std::map<std::string, std::string>{});

  m.def("metrics_columns", &metrics_columns);
}
