#include <doctest.h>

#include <cmath>

#include "resched/risk.hpp"
#include "support/tiny.hpp"

using namespace resched;

namespace {

CandidateSchedule one_term(const ResourceId& r, Tick start, Tick t_max) {
  CandidateSchedule c;
  c.events.push_back({EventSpec::transform("P1", r, "raw", "P1"), r, start, start + 5});
  c.slack_terms.push_back({r, start, t_max, kInfinite, 0, 5, 1});
  return c;
}

Registry machines(std::initializer_list<ResourceId> ids) {
  Registry reg;
  for (const auto& id : ids) reg.add(tiny::machine(id, {"P1"}));
  return reg;
}

ResourceStatus ops(int used, int nominal) {
  ResourceStatus s;
  s.op_count = used;
  s.nominal_ops = nominal;
  return s;
}

// Probability mass of round(X) = k for X normal(mean, sd) cut at 3 sd.
std::map<Tick, double> rounded_truncated_normal(double mean, double sd) {
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0))); };
  const double lo = mean - 3 * sd, hi = mean + 3 * sd;
  std::map<Tick, double> pmf;
  double total = 0.0;
  for (Tick k = static_cast<Tick>(std::floor(lo)); k <= static_cast<Tick>(std::ceil(hi)); ++k) {
    const double a = std::max(lo, k - 0.5), b = std::min(hi, k + 0.5);
    if (b <= a) continue;
    pmf[std::max<Tick>(k, 1)] += cdf(b) - cdf(a);
    total += cdf(b) - cdf(a);
  }
  for (auto& [k, p] : pmf) p /= total;
  return pmf;
}

// Exact 1 - E[clamp(slack/t_max)] with both durations random.
double exact_q(const SlackTerm& t, double sigma_frac) {
  const auto post =
      rounded_truncated_normal(t.posterior_duration, sigma_frac * t.posterior_duration);
  const auto own = rounded_truncated_normal(t.own_duration, sigma_frac * t.own_duration);
  double e = 0.0;
  for (const auto& [a, pa] : post)
    for (const auto& [b, pb] : own) {
      const double tm = static_cast<double>(t.bound - a - t.delta - b);
      const double ratio = tm > 0 ? std::clamp((tm - t.start) / tm, 0.0, 1.0) : 0.0;
      e += pa * pb * ratio;
    }
  return 1.0 - e;
}

}  // namespace

TEST_CASE("slack") {
  CHECK(slack(1, 13) == 12);
  CHECK(slack(13, 13) == 0);
  CHECK(is_infinite(slack(1, kInfinite)));
}

TEST_CASE("delay_risk_q") {
  CHECK(delay_risk_q({{12, 13}}) == doctest::Approx(1.0 - 12.0 / 13.0));
  CHECK(delay_risk_q({{kInfinite, kInfinite}, {kInfinite, kInfinite}}) == 0.0);
  CHECK(delay_risk_q({{0, 13}}) == 1.0);
  CHECK(delay_risk_q({{12, 13}, {kInfinite, kInfinite}}) ==
        doctest::Approx(1.0 - (12.0 / 13.0 + 1.0) / 2.0));
}

TEST_CASE("breakdown_probability") {
  CHECK(breakdown_probability(ops(0, 100)) == 0.0);
  CHECK(breakdown_probability(ops(50, 100)) == 0.5);
  CHECK(breakdown_probability(ops(120, 100)) == 1.0);
  CHECK_THROWS_AS(breakdown_probability(ops(1, 0)), InvalidNominalOps);
  CHECK_THROWS_AS(breakdown_probability(ops(1, -3)), InvalidNominalOps);
}

TEST_CASE("assess: posterior-free resource with no wear") {
  const auto reg = machines({"M1"});
  const std::map<ResourceId, ResourceStatus> st{{"M1", ops(0, 30)}};
  const auto r = assess(one_term("M1", 1, kInfinite), reg, st, {}, {}, 1);
  CHECK(r.r1 == 0.0);
  CHECK(r.r2 == 0.0);
  CHECK(r.total == 0.0);
}

TEST_CASE("assess: r2 is the largest breakdown probability") {
  const auto reg = machines({"M1", "M2"});
  auto c = one_term("M1", 1, kInfinite);
  c.slack_terms.push_back({"M2", 1, kInfinite, kInfinite, 0, 5, 1});
  const std::map<ResourceId, ResourceStatus> st{{"M1", ops(2, 10)}, {"M2", ops(6, 10)}};
  const auto r = assess(c, reg, st, {}, {}, 1);
  CHECK(r.per_resource_p.at("M1") == doctest::Approx(0.2));
  CHECK(r.r2 == doctest::Approx(0.6));
}

TEST_CASE("assess: deterministic slack composed with wear") {
  const auto reg = machines({"M1"});
  const std::map<ResourceId, ResourceStatus> st{{"M1", ops(50, 100)}};
  const RiskWeights w{0.2, 0.8, 1.0};
  const UncertaintyModel off{0.0, 1000};
  const auto r = assess(one_term("M1", 1, 13), reg, st, w, off, 1);
  CHECK(r.r1 == doctest::Approx(1.0 / 13.0));
  CHECK(r.total == doctest::Approx(0.2 / 13.0 + 0.4));
  CHECK(r.total == doctest::Approx(0.4154).epsilon(1e-3));
  CHECK(r.unscaled(w) == doctest::Approx(r.total));
}

TEST_CASE("assess ignores robots") {
  Registry reg;
  reg.add(tiny::machine("M1", {"P1"}));
  reg.add(tiny::robot("R1", {"M1", "Exit"}));
  CandidateSchedule c;
  c.slack_terms.push_back({"R1", 0, 5, kInfinite, 0, 20, 0});
  const std::map<ResourceId, ResourceStatus> st{{"R1", ops(30, 30)}};
  const auto r = assess(c, reg, st, {}, {}, 1);
  CHECK(r.r1 == 0.0);
  CHECK(r.r2 == 0.0);
  CHECK(r.per_resource_q.empty());
}

TEST_CASE("assess: same resource twice takes the larger Q") {
  const auto reg = machines({"M1"});
  auto c = one_term("M1", 1, 13);
  c.slack_terms.push_back({"M1", 10, 13, kInfinite, 0, 5, 1});
  const auto r = assess(c, reg, {}, {}, {0.0, 1}, 1);
  CHECK(r.per_resource_q.at("M1") == doctest::Approx(1.0 - 3.0 / 13.0));
}

TEST_CASE("risk stays in [0, 1] and grows with wear") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Tick> tick(0, 400);
  std::uniform_int_distribution<int> wear(0, 60);
  const auto reg = machines({"M1", "M2", "M3"});
  for (int i = 0; i < 2000; ++i) {
    CandidateSchedule c;
    std::map<ResourceId, ResourceStatus> st;
    for (const auto& id : {"M1", "M2", "M3"}) {
      const Tick start = tick(rng);
      const Tick t_max = i % 5 == 0 ? kInfinite : start + tick(rng);
      c.slack_terms.push_back({id, start, t_max, t_max + 60, 30, 30, 0});
      st[id] = ops(wear(rng), 40);
    }
    const UncertaintyModel model{i % 2 ? 0.05 : 0.0, 50};
    const auto r = assess(c, reg, st, {}, model, i);
    CHECK(r.r1 >= 0.0);
    CHECK(r.r1 <= 1.0);
    CHECK(r.r2 >= 0.0);
    CHECK(r.r2 <= 1.0);
    st["M1"].op_count += 10;
    CHECK(assess(c, reg, st, {}, model, i).total >= r.total);
  }
}

TEST_CASE("adding a posterior-free resource never raises r1") {
  Registry reg = machines({"M1", "M2"});
  auto c = one_term("M1", 3, 20);
  const auto before = assess(c, reg, {}, {}, {0.0, 1}, 1).r1;
  c.slack_terms.push_back({"M2", 0, kInfinite, kInfinite, 0, 5, 1});
  CHECK(assess(c, reg, {}, {}, {0.0, 1}, 1).r1 <= before);
}

TEST_CASE("sample_duration") {
  std::mt19937_64 rng(11);
  CHECK(sample_duration(200, 0.0, rng) == 200);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Tick d = sample_duration(200, 0.05, rng);
    CHECK(d >= 170);
    CHECK(d <= 230);
    sum += static_cast<double>(d);
  }
  CHECK(std::abs(sum / n - 200.0) < 2.0);
}

TEST_CASE("Monte-Carlo delay risk converges to the exact expectation") {
  const SlackTerm t{"M1", 150, 190, 400, 100, 100, 10};
  const double exact = exact_q(t, 0.05);
  CandidateSchedule c;
  c.slack_terms.push_back(t);
  const auto reg = machines({"M1"});
  const UncertaintyModel model{0.05, 10000};
  const double a = assess(c, reg, {}, {}, model, 1).r1;
  const double b = assess(c, reg, {}, {}, model, 2).r1;
  CHECK(std::abs(a - b) < 0.02);
  CHECK(std::abs(a - exact) < 0.02);
  CHECK(std::abs(b - exact) < 0.02);
  CHECK(assess(c, reg, {}, {}, model, 1).r1 == a);
}
