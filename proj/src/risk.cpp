#include "resched/risk.hpp"

#include <algorithm>
#include <cmath>

namespace resched {

void RiskWeights::check() const {
  if (w1 < 0.0 || w2 < 0.0 || std::abs(w1 + w2 - 1.0) > 1e-9)
    throw ConfigError("risk weights must be non-negative and sum to 1");
  if (W < 0.0) throw ConfigError("risk scale W must be non-negative");
}

Tick slack(Tick start, Tick t_max) {
  return is_infinite(t_max) ? kInfinite : t_max - start;
}

double delay_risk_q(const std::vector<SlackSample>& samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : samples) {
    if (is_infinite(s.t_max) || is_infinite(s.slack)) {
      sum += 1.0;
    } else if (s.t_max > 0) {
      sum += std::clamp(static_cast<double>(s.slack) / static_cast<double>(s.t_max), 0.0, 1.0);
    }
  }
  return std::clamp(1.0 - sum / static_cast<double>(samples.size()), 0.0, 1.0);
}

double breakdown_probability(const ResourceStatus& status) {
  if (status.nominal_ops <= 0)
    throw InvalidNominalOps("nominal operations must be positive, got " +
                            std::to_string(status.nominal_ops));
  return std::min(1.0, static_cast<double>(status.op_count) / status.nominal_ops);
}

Tick sample_duration(Tick nominal, double sigma_frac, std::mt19937_64& rng) {
  if (sigma_frac <= 0.0) return nominal;
  const double mean = static_cast<double>(nominal);
  const double sigma = sigma_frac * mean;
  std::normal_distribution<double> normal(mean, sigma);
  double x = normal(rng);
  while (std::abs(x - mean) > 3.0 * sigma) x = normal(rng);
  return std::max<Tick>(1, std::llround(x));
}

namespace {

double term_q(const SlackTerm& term, const UncertaintyModel& model, std::mt19937_64& rng) {
  if (is_infinite(term.t_max)) return 0.0;
  if (!model.enabled()) return delay_risk_q({{slack(term.start, term.t_max), term.t_max}});
  std::vector<SlackSample> samples;
  samples.reserve(static_cast<std::size_t>(model.n_samples));
  for (int i = 0; i < model.n_samples; ++i) {
    const Tick posterior = term.posterior_duration > 0
                               ? sample_duration(term.posterior_duration, model.sigma_frac, rng)
                               : 0;
    const Tick own = sample_duration(term.own_duration, model.sigma_frac, rng);
    const Tick t_max = term.bound - posterior - term.delta - own;
    samples.push_back({t_max - term.start, t_max});
  }
  return delay_risk_q(samples);
}

}  // namespace

RiskReport assess(const CandidateSchedule& candidate, const Registry& registry,
                  const std::map<ResourceId, ResourceStatus>& statuses, const RiskWeights& weights,
                  const UncertaintyModel& model, std::uint64_t seed) {
  RiskReport report;
  std::mt19937_64 rng(seed);
  for (const auto& term : candidate.slack_terms) {
    if (!registry.contains(term.resource) ||
        registry.at(term.resource).klass != ResourceClass::Transformation)
      continue;
    const double q = term_q(term, model, rng);
    auto [it, fresh] = report.per_resource_q.emplace(term.resource, q);
    if (!fresh) it->second = std::max(it->second, q);
    auto st = statuses.find(term.resource);
    report.per_resource_p[term.resource] =
        st == statuses.end() ? 0.0 : breakdown_probability(st->second);
  }
  for (const auto& [r, q] : report.per_resource_q) report.r1 = std::max(report.r1, q);
  for (const auto& [r, p] : report.per_resource_p) report.r2 = std::max(report.r2, p);
  report.total = weights.W * (weights.w1 * report.r1 + weights.w2 * report.r2);
  return report;
}

}  // namespace resched
