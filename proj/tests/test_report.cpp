#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "resched/report.hpp"

using namespace resched;

namespace {

TrialMetrics trial(std::uint64_t seed, std::size_t damaged, double risk) {
  TrialMetrics t;
  t.seed = seed;
  t.products = 20;
  t.damaged = damaged;
  t.completed = 20 - damaged;
  t.total_processes = 80;
  t.rescheduled_processes = 3 * damaged;
  t.communications = 100 + 7 * seed;
  t.avg_risk = risk;
  t.utilization = 0.43;
  for (ProductId p = 1; p <= 20; ++p)
    if (p > damaged) t.cycle_times[p] = 500 + 10 * static_cast<Tick>(p) + static_cast<Tick>(seed);
  double sum = 0.0;
  for (const auto& [p, c] : t.cycle_times) sum += static_cast<double>(c);
  t.mean_cycle_time = sum / static_cast<double>(t.cycle_times.size());
  return t;
}

std::vector<std::string> row_of(const std::string& text, const std::string& first) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::vector<std::string> out;
    for (std::string c; cells >> c;) out.push_back(c);
    if (!out.empty() && out[0] == first) return out;
  }
  return {};
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

TEST_CASE("metrics CSV layout") {
  const auto& cols = metrics_columns();
  CHECK(cols.size() == 23);
  CHECK(cols.front() == "trial");
  const auto table = parse_csv(metrics_csv({trial(1, 2, 0.25), trial(2, 3, 0.5)}));
  CHECK(table.header == cols);
  REQUIRE(table.rows.size() == 2);
  for (const auto& r : table.rows) CHECK(r.size() == cols.size());
  CHECK(table.numbers("damaged") == std::vector<double>{2, 3});
  CHECK(table.rows[1][table.column("avg_risk")] == "0.5000");
  CHECK(table.rows[0][table.column("mode")] == "distributed");
  CHECK_THROWS(table.column("nope"));
}

TEST_CASE("mean and sample deviation") {
  const auto [m, sd] = mean_sd({2, 4, 4, 4, 5, 5, 7, 9});
  CHECK(m == doctest::Approx(5.0));
  CHECK(sd == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK(mean_sd({3}).second == 0.0);
}

TEST_CASE("summary is recomputed from the CSV text") {
  std::vector<TrialMetrics> ts{trial(1, 2, 0.123456), trial(2, 5, 0.2), trial(3, 4, 0.31)};
  const auto metrics = metrics_csv(ts);
  const auto cycles = cycle_times_csv(ts);
  const auto summary = summary_text(metrics, cycles);

  auto check_row = [&](const std::string& name, std::vector<double> xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    const auto row = row_of(summary, name);
    REQUIRE(row.size() == 3);
    CHECK(row[1] == fixed6(m));
    CHECK(row[2] == fixed6(sd));
  };
  check_row("damaged", {2, 5, 4});
  check_row("communications", {107, 114, 121});
  // Four-decimal CSV values, not the exact doubles.
  check_row("avg_risk", {0.1235, 0.2, 0.31});

  // Cohort 2 holds products 11..20, none damaged.
  double sum = 0.0;
  int n = 0;
  for (const auto& t : ts)
    for (const auto& [p, c] : t.cycle_times)
      if (p >= 11 && p <= 20) {
        sum += static_cast<double>(c);
        ++n;
      }
  const auto cohort = row_of(summary, "2");
  REQUIRE(cohort.size() == 3);
  CHECK(cohort[1] == "11-20");
  CHECK(cohort[2] == fixed6(sum / n));
}

TEST_CASE("comparison of a run with itself has zero deltas") {
  const auto csv = metrics_csv({trial(1, 2, 0.3), trial(2, 4, 0.1)});
  const auto text = comparison_text("left", csv, "right", csv);
  std::istringstream in(text);
  int deltas = 0;
  for (std::string line; std::getline(in, line);) {
    const auto first = line.find_first_not_of(' ');
    if (first == std::string::npos) continue;
    std::istringstream cells(line);
    std::string name, label, value;
    cells >> name >> label;
    if (label != "delta") continue;
    cells >> value;
    CHECK(std::abs(std::stod(value)) == 0.0);
    ++deltas;
  }
  CHECK(deltas == 19);
  const auto damaged = row_of(text, "damaged");
  REQUIRE(damaged.size() >= 6);
  CHECK(damaged[damaged.size() - 1] == "15.00%");
}

TEST_CASE("comparison needs the same seeds") {
  const auto a = metrics_csv({trial(1, 2, 0.3)});
  const auto b = metrics_csv({trial(2, 2, 0.3)});
  CHECK_THROWS_AS(comparison_text("a", a, "b", b), ConfigError);
}

TEST_CASE("cycle time CSV") {
  const auto table = parse_csv(cycle_times_csv({trial(4, 18, 0.0)}));
  CHECK(table.header == std::vector<std::string>{"trial", "seed", "product", "cycle_time"});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0][2] == "19");
  CHECK(table.rows[0][3] == "694");
}
