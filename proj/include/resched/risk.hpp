#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "resched/capability.hpp"
#include "resched/protocol.hpp"

namespace resched {

struct RiskWeights {
  double w1 = 0.2;
  double w2 = 0.8;
  double W = 1000.0;

  /// Throws ConfigError unless w1, w2 >= 0 and w1 + w2 = 1.
  void check() const;
};

struct RiskReport {
  double r1 = 0.0;
  double r2 = 0.0;
  std::map<ResourceId, double> per_resource_q;
  std::map<ResourceId, double> per_resource_p;
  double total = 0.0;  // W (w1 r1 + w2 r2)

  double unscaled(const RiskWeights& w) const { return w.w1 * r1 + w.w2 * r2; }
};

struct SlackSample {
  Tick slack = 0;
  Tick t_max = kInfinite;
};

/// How uncertain operation times are; sigma_frac 0 disables sampling.
struct UncertaintyModel {
  double sigma_frac = 0.05;
  int n_samples = 1000;

  bool enabled() const { return sigma_frac > 0.0 && n_samples > 0; }
};

/// t_max - start, infinite when t_max is.
Tick slack(Tick start, Tick t_max);

/// 1 - mean(slack / t_max); infinite t_max counts as ratio 1.
double delay_risk_q(const std::vector<SlackSample>& samples);

/// min(1, o_c / o_n). Throws InvalidNominalOps when o_n <= 0.
double breakdown_probability(const ResourceStatus& status);

/// Truncated normal around `nominal` with sigma = sigma_frac * nominal,
/// cut at 3 sigma, rounded, at least 1.
Tick sample_duration(Tick nominal, double sigma_frac, std::mt19937_64& rng);

/// Delay and breakdown risk of a candidate. Only transformation resources
/// count. Posterior and own durations are resampled when the model is
/// enabled; otherwise the plug-in slack is used.
RiskReport assess(const CandidateSchedule& candidate, const Registry& registry,
                  const std::map<ResourceId, ResourceStatus>& statuses, const RiskWeights& weights,
                  const UncertaintyModel& model, std::uint64_t seed);

}  // namespace resched
