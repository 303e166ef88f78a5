// resched: run seeded rescheduling trials and compare their metrics.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "resched/report.hpp"
#include "resched/sim.hpp"

namespace fs = std::filesystem;
using namespace resched;

namespace {

constexpr int kConfigExit = 2;
constexpr int kInfeasibleExit = 3;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + (dir / name).string());
  out << text;
}

fs::path out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RESCHED_OUT"); env && *env) return env;
  return "resched_out";
}

struct RunOptions {
  std::string scenario = "minifab";
  std::string mode = "distributed";
  std::string risk = "on";
  int trials = 5;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<std::string> overrides;
  bool shadow = false;
};

int do_run(const RunOptions& o) {
  if (o.trials < 1) throw ConfigError("trials must be at least 1");
  if (o.risk != "on" && o.risk != "off") throw ConfigError("risk must be on or off");
  Scenario scenario = load_scenario(o.scenario);
  SimConfig config;
  config.mode = parse_mode(o.mode);
  config.risk_enabled = o.risk == "on";
  config.shadow_centralized = o.shadow;
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set needs key=value, got " + kv);
    apply_override(scenario, config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  scenario.check();
  config.check();

  const auto registry = scenario.registry();
  const auto initial = generate_initial_schedule(scenario, registry, config.max_hops);
  std::vector<TrialMetrics> trials;
  for (int i = 0; i < o.trials; ++i) {
    trials.push_back(run_trial(scenario, initial, config, o.seed + static_cast<std::uint64_t>(i)));
    const auto& t = trials.back();
    std::cerr << "trial " << i + 1 << " seed " << t.seed << ": completed " << t.completed
              << " damaged " << t.damaged << " broken " << t.broken_machines
              << " communications " << t.communications << '\n';
  }

  const fs::path dir = out_dir(o.out);
  fs::create_directories(dir);
  const std::string metrics = metrics_csv(trials);
  const std::string cycles = cycle_times_csv(trials);
  write(dir, "metrics.csv", metrics);
  write(dir, "cycle_times.csv", cycles);
  write(dir, "timing.csv", timing_csv(trials));
  write(dir, "events.log", events_log(trials));
  write(dir, "summary.txt", summary_text(metrics, cycles));
  std::cout << "wrote " << dir.string() << '\n';
  return 0;
}

int do_compare(const std::string& a, const std::string& b, const std::string& out) {
  auto label = [](const std::string& p) {
    const CsvTable t = parse_csv(slurp(fs::path(p) / "metrics.csv"));
    if (t.rows.empty()) throw ConfigError(p + " has no trials");
    const auto& r = t.rows.front();
    return r.at(t.column("mode")) + "/risk-" + r.at(t.column("risk"));
  };
  const std::string text = comparison_text(label(a), slurp(fs::path(a) / "metrics.csv"), label(b),
                                           slurp(fs::path(b) / "metrics.csv"));
  const fs::path dir = out_dir(out);
  fs::create_directories(dir);
  write(dir, "comparison.txt", text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed and centralized rescheduling simulator"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run seeded trials and write metrics");
  run_cmd->add_option("--scenario", run.scenario, "builtin name or scenario JSON path");
  run_cmd->add_option("--mode", run.mode, "distributed or centralized");
  run_cmd->add_option("--risk", run.risk, "on or off");
  run_cmd->add_option("--trials", run.trials, "number of trials");
  run_cmd->add_option("--seed", run.seed, "seed of the first trial");
  run_cmd->add_option("--out", run.out, "output directory (default $RESCHED_OUT)");
  run_cmd->add_option("--set", run.overrides, "key=value override")->take_all();
  run_cmd->add_flag("--shadow-centralized", run.shadow,
                    "also record the centralized optimum at every distributed repair");

  std::string cmp_a, cmp_b, cmp_out;
  auto* cmp_cmd = app.add_subcommand("compare", "paired table of two run directories");
  cmp_cmd->add_option("a", cmp_a, "first run directory")->required();
  cmp_cmd->add_option("b", cmp_b, "second run directory")->required();
  cmp_cmd->add_option("--out", cmp_out, "output directory (default $RESCHED_OUT)");

  std::string sc_name = "minifab";
  std::uint64_t sc_seed = 1;
  auto* sc_cmd = app.add_subcommand("scenario", "print a scenario as JSON");
  sc_cmd->add_option("--scenario", sc_name, "builtin name or scenario JSON path");
  sc_cmd->add_option("--seed", sc_seed, "seed for builtin process times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run_cmd) return do_run(run);
    if (*cmp_cmd) return do_compare(cmp_a, cmp_b, cmp_out);
    if (*sc_cmd) {
      std::cout << scenario_to_json(sc_name == "minifab" ? build_minifab(sc_seed)
                                                         : load_scenario(sc_name));
      return 0;
    }
  } catch (const InfeasibleScenario& e) {
    std::cerr << "infeasible scenario: " << e.what() << '\n';
    return kInfeasibleExit;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
