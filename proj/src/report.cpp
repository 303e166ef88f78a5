#include "resched/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace resched {

namespace {

std::string real(double v, int places = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(places) << v;
  return os.str();
}

const std::vector<std::string> kPercentOf = {"damaged", "rescheduled_processes"};

}  // namespace

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols = {
      "trial",           "seed",          "mode",
      "risk",            "products",      "completed",
      "damaged",         "in_flight",     "broken_machines",
      "disruptions",     "repairs",       "rescheduled_processes",
      "total_processes", "communications", "escalations",
      "deferred",        "mean_cycle_time", "max_cycle_time",
      "makespan",        "peak_risk",     "avg_risk",
      "utilization",     "horizon_exceeded"};
  return cols;
}

std::string metrics_csv(const std::vector<TrialMetrics>& trials) {
  std::ostringstream os;
  const auto& cols = metrics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& t = trials[i];
    os << i + 1 << ',' << t.seed << ',' << to_string(t.mode) << ','
       << (t.risk_enabled ? "on" : "off") << ',' << t.products << ',' << t.completed << ','
       << t.damaged << ',' << t.in_flight << ','
       << t.broken_machines << ',' << t.disruptions << ',' << t.repairs << ','
       << t.rescheduled_processes << ',' << t.total_processes << ',' << t.communications << ','
       << t.escalations << ',' << t.deferred << ',' << real(t.mean_cycle_time) << ','
       << t.max_cycle_time << ',' << t.makespan << ',' << real(t.peak_risk) << ','
       << real(t.avg_risk) << ',' << real(t.utilization) << ',' << (t.horizon_exceeded ? 1 : 0)
       << '\n';
  }
  return os.str();
}

std::string cycle_times_csv(const std::vector<TrialMetrics>& trials) {
  std::ostringstream os;
  os << "trial,seed,product,cycle_time\n";
  for (std::size_t i = 0; i < trials.size(); ++i)
    for (const auto& [p, ct] : trials[i].cycle_times)
      os << i + 1 << ',' << trials[i].seed << ',' << p << ',' << ct << '\n';
  return os.str();
}

std::string timing_csv(const std::vector<TrialMetrics>& trials) {
  std::ostringstream os;
  os << "trial,seed,repairs,reschedule_wall_ms\n";
  for (std::size_t i = 0; i < trials.size(); ++i)
    os << i + 1 << ',' << trials[i].seed << ',' << trials[i].repairs << ','
       << real(trials[i].wall_ms) << '\n';
  return os.str();
}

std::string events_log(const std::vector<TrialMetrics>& trials) {
  std::ostringstream os;
  os << "# trial seed tick mode resource product event span candidates messages j risk outcome\n";
  for (std::size_t i = 0; i < trials.size(); ++i) {
    for (const auto& r : trials[i].repair_log) {
      os << i + 1 << ' ' << trials[i].seed << ' ' << r.tick << ' ' << to_string(trials[i].mode)
         << ' ' << r.resource << ' ' << r.product << ' ' << r.event << ' ' << r.span_length << ' '
         << r.candidates << ' ' << r.messages << ' ' << real(r.j) << ' ' << real(r.risk) << ' '
         << r.outcome << '\n';
    }
  }
  return os.str();
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("no column " + name);
  return static_cast<std::size_t>(it - header.begin());
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(std::stod(r.at(c)));
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::string summary_text(const std::string& metrics, const std::string& cycle_times) {
  const CsvTable m = parse_csv(metrics);
  std::ostringstream os;
  os << "trials " << m.rows.size() << "\n\n";
  os << std::left << std::setw(24) << "metric" << std::right << std::setw(18) << "mean"
     << std::setw(18) << "sd" << '\n';
  const auto& cols = metrics_columns();
  for (auto it = std::find(cols.begin(), cols.end(), "products"); it != cols.end(); ++it) {
    const auto [mean, sd] = mean_sd(m.numbers(*it));
    os << std::left << std::setw(24) << *it << std::right << std::setw(18) << real(mean, 6)
       << std::setw(18) << real(sd, 6) << '\n';
  }

  const CsvTable c = parse_csv(cycle_times);
  std::map<long long, std::vector<double>> cohorts;
  const std::size_t pc = c.column("product"), cc = c.column("cycle_time");
  for (const auto& r : c.rows)
    cohorts[(std::stoll(r.at(pc)) - 1) / 10].push_back(std::stod(r.at(cc)));
  os << "\ncohort  products   mean_cycle_time\n";
  for (const auto& [k, xs] : cohorts) {
    const auto [mean, sd] = mean_sd(xs);
    os << std::setw(6) << k + 1 << "  " << std::setw(4) << k * 10 + 1 << '-' << std::left
       << std::setw(4) << k * 10 + 10 << std::right << std::setw(18) << real(mean, 6) << '\n';
  }
  return os.str();
}

std::string comparison_text(const std::string& label_a, const std::string& metrics_a,
                            const std::string& label_b, const std::string& metrics_b) {
  const CsvTable a = parse_csv(metrics_a);
  const CsvTable b = parse_csv(metrics_b);
  if (a.numbers("seed") != b.numbers("seed"))
    throw ConfigError("compared runs use different seeds");

  std::ostringstream os;
  const std::size_t n = a.rows.size();
  os << std::left << std::setw(24) << "metric" << std::setw(24) << "run";
  for (std::size_t i = 0; i < n; ++i)
    os << std::right << std::setw(12) << ("trial " + std::to_string(i + 1));
  os << std::setw(14) << "average" << std::setw(12) << "percent" << '\n';

  const auto& cols = metrics_columns();
  for (auto it = std::find(cols.begin(), cols.end(), "products"); it != cols.end(); ++it) {
    const bool pct = std::find(kPercentOf.begin(), kPercentOf.end(), *it) != kPercentOf.end();
    const std::string base = *it == "damaged" ? "products" : "total_processes";
    double means[2] = {0.0, 0.0};
    int k = 0;
    for (const auto* t : {&a, &b}) {
      const auto xs = t->numbers(*it);
      means[k] = mean_sd(xs).first;
      os << std::left << std::setw(24) << *it << std::setw(24) << (k == 0 ? label_a : label_b);
      for (const auto& r : t->rows) os << std::right << std::setw(12) << r.at(t->column(*it));
      os << std::setw(14) << real(means[k]);
      if (pct) {
        const double denom = mean_sd(t->numbers(base)).first;
        os << std::setw(12) << (denom > 0 ? real(100.0 * means[k] / denom, 2) + "%" : "N/A");
      } else {
        os << std::setw(12) << "N/A";
      }
      os << '\n';
      ++k;
    }
    os << std::left << std::setw(24) << *it << std::setw(24) << "delta";
    for (std::size_t i = 0; i < n; ++i) os << std::setw(12) << "";
    os << std::right << std::setw(14) << real(means[1] - means[0]) << '\n';
  }
  return os.str();
}

}  // namespace resched
