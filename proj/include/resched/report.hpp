#pragma once

#include <string>
#include <vector>

#include "resched/sim.hpp"

namespace resched {

/// metrics.csv columns, one per scalar TrialMetrics field plus the trial
/// index.
const std::vector<std::string>& metrics_columns();

std::string metrics_csv(const std::vector<TrialMetrics>& trials);
std::string cycle_times_csv(const std::vector<TrialMetrics>& trials);
std::string timing_csv(const std::vector<TrialMetrics>& trials);
std::string events_log(const std::vector<TrialMetrics>& trials);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);

/// Mean and sample standard deviation of `xs` (0 for fewer than two).
std::pair<double, double> mean_sd(const std::vector<double>& xs);

/// Means and standard deviations of every numeric metrics column and the
/// mean cycle time of each 10-product cohort, all read back from the CSV
/// texts.
std::string summary_text(const std::string& metrics, const std::string& cycle_times);

/// Paired per-seed table of two runs. Throws ConfigError when the seeds
/// differ.
std::string comparison_text(const std::string& label_a, const std::string& metrics_a,
                            const std::string& label_b, const std::string& metrics_b);

}  // namespace resched
