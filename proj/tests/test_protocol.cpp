#include <doctest.h>

#include "resched/protocol.hpp"
#include "resched/scenario.hpp"
#include "support/tiny.hpp"

using namespace resched;
using tiny::at;
using tiny::mv;
using tiny::op;

namespace {

ResourceSchedule line(const std::vector<std::pair<Tick, Tick>>& spans) {
  ResourceSchedule rs{"M1", true, {}};
  ProductId p = 1;
  for (auto [s, e] : spans) {
    auto entry = at(op("P1", "M1", "raw", "P1"), p, "M1", s, e);
    entry.uid = p++;
    rs.entries.push_back(entry);
  }
  return rs;
}

std::vector<Tick> starts(const DisruptionReport& r) {
  std::vector<Tick> out;
  for (const auto& e : r.affected) out.push_back(e.start);
  return out;
}

ProductSchedule numbered(ProductSchedule ps) {
  EntryId uid = 1;
  for (auto& e : ps.entries) e.uid = uid++;
  return ps;
}

// Entry -> M1 -> M2 with P1 then P2.
ProductSchedule two_step() {
  return numbered({1,
                   {"Entry", "raw"},
                   0,
                   {at(mv("Entry", "M1"), 1, "R1", 0, 20),
                    at(op("P1", "M1", "raw", "P1"), 1, "M1", 20, 70),
                    at(mv("M1", "M2"), 1, "R1", 70, 90),
                    at(op("P2", "M2", "P1", "P1+P2"), 1, "M2", 90, 140)}});
}

}  // namespace

TEST_CASE("affected_events orders by inverse start then due") {
  const std::map<ProductId, Tick> same{{1, 1000}, {2, 1000}};
  CHECK(starts(affected_events(line({{400, 450}, {100, 150}}), 50, {}, same)) ==
        std::vector<Tick>{100, 400});

  auto both = line({{100, 150}, {100, 150}});
  const std::map<ProductId, Tick> dues{{1, 2000}, {2, 500}};
  const auto r = affected_events(both, 0, {}, dues);
  REQUIRE(r.affected.size() == 2);
  CHECK(r.affected[0].product == 2);
  CHECK(r.affected[1].product == 1);

  const std::map<ProductId, Tick> any{{1, 0}, {2, 0}, {3, 0}};
  CHECK(starts(affected_events(line({{10, 15}, {20, 25}, {30, 35}}), 15, {1.0, 0.0}, any)) ==
        std::vector<Tick>{20, 30});
  CHECK(affected_events(line({}), 0, {}, {}).affected.empty());
}

TEST_CASE("replacement_span around a transform") {
  const auto ps = two_step();
  const auto span = replacement_span(ps.entries[1], ps, "M1");
  REQUIRE(span.events.size() == 3);
  CHECK(span.first == 0);
  CHECK(span.events[0].uid == 1);
  CHECK(span.events[2].uid == 3);
  CHECK(span.x_prior == ProductState{"Entry", "raw"});
  CHECK(span.x_post == ProductState{"M2", "P1"});

  std::vector<EventSpec> evs;
  for (const auto& e : span.events) evs.push_back(e.event);
  CHECK(apply_sequence(span.x_prior, evs) == span.x_post);
}

TEST_CASE("replacement_span of a transport is the transport") {
  const auto ps = two_step();
  const auto span = replacement_span(ps.entries[2], ps, "");
  REQUIRE(span.events.size() == 1);
  CHECK(span.first == 2);
  CHECK(span.x_prior == ProductState{"M1", "P1"});
  CHECK(span.x_post == ProductState{"M2", "P1"});
}

TEST_CASE("replacement_span when the product starts at the machine") {
  const auto ps = numbered({1,
                            {"M1", "raw"},
                            0,
                            {at(op("P1", "M1", "raw", "P1"), 1, "M1", 0, 50),
                             at(mv("M1", "M2"), 1, "R1", 50, 70),
                             at(op("P2", "M2", "P1", "P1+P2"), 1, "M2", 70, 120)}});
  const auto span = replacement_span(ps.entries[0], ps, "M1");
  REQUIRE(span.events.size() == 2);
  CHECK(span.x_prior == ProductState{"M1", "raw"});
  CHECK(span.x_post == ProductState{"M2", "P1"});

  ScheduledEvent stranger = ps.entries[0];
  stranger.uid = 42;
  CHECK_THROWS_AS(replacement_span(stranger, ps, "M1"), EventNotFound);
}

TEST_CASE("broadcast_request") {
  MessageBus bus;
  RepairRequest req;
  CHECK(broadcast_request(req, {"M2", "M3", "M4"}, bus, 0) == 3);
  CHECK(bus.count(MessageKind::BidRequest) == 3);
  CHECK_THROWS_AS(broadcast_request(req, {}, bus, 0), EmptyCluster);

  const auto reg = build_minifab(1).registry();
  std::size_t p1_machines = 0;
  for (const auto& [id, m] : reg.all()) p1_machines += m.has_event("P1");
  MessageBus fab;
  CHECK(broadcast_request(req, clustering_ras("P1", "M01", reg), fab, 0) == p1_machines - 1);
}

TEST_CASE("notify_sequential_removals") {
  ReplacementSpan span;
  span.events = {at(mv("Entry", "M1"), 1, "R1", 0, 20),
                 at(op("P1", "M1", "raw", "P1"), 1, "M1", 20, 70),
                 at(mv("M1", "M2"), 1, "R2", 70, 90)};
  MessageBus bus;
  CHECK(notify_sequential_removals(span, "M1", bus, 0) == 2);

  span.events[2].resource = "R1";
  CHECK(notify_sequential_removals(span, "M1", bus, 0) == 2);
  CHECK(bus.count(MessageKind::RemovalNotice) == 4);

  ReplacementSpan single;
  single.events = {at(mv("M1", "M2"), 1, "R1", 70, 90)};
  CHECK(notify_sequential_removals(single, "R1", bus, 0) == 0);
}

namespace {

// Two machines both able to run P1 and one robot joining Entry, M1, M2, Exit.
struct TwoMachines {
  Registry reg;
  Plan plan;
  std::map<ResourceId, ResourceStatus> status;
  EntryId op_uid = 0;

  explicit TwoMachines(bool robot_reaches_m2 = true) {
    reg.add(tiny::machine("M1", {"P1"}));
    reg.add(tiny::machine("M2", {"P1"}));
    if (robot_reaches_m2)
      reg.add(tiny::robot("R1", {"Entry", "M1", "M2", "Exit"}));
    else
      reg.add(tiny::robot("R1", {"Entry", "M1", "Exit"}));
    tiny::add_resources(plan, reg);
    plan.add_product(1, {"Entry", "raw"}, 10);
    plan.append(at(mv("Entry", "M1"), 1, "R1", 10, 30));
    op_uid = plan.append(at(op("P1", "M1", "raw", "P1"), 1, "M1", 30, 80));
    plan.append(at(mv("M1", "Exit"), 1, "R1", 80, 100));
    status["M1"].break_down(5000);
  }

  RepairEnv env() { return RepairEnv{plan, reg, status, 10, 0, kInfinite, 2, {}}; }

  RepairRequest request(RepairEnv& e) {
    const auto& e_q = plan.entry(op_uid);
    const auto remaining = plan.remaining_schedule(1);
    const auto span = replacement_span(e_q, remaining, "M1");
    auto req = make_request(e, e_q, span, remaining);
    for (auto uid : req.span_uids) plan.detach(uid);
    return req;
  }
};

}  // namespace

TEST_CASE("generate_candidate: a transform bidder reached by one robot") {
  TwoMachines f;
  auto env = f.env();
  const auto req = f.request(env);
  CHECK(req.requested_time == 10);
  CHECK(req.span.size() == 3);

  MessageBus bus;
  const auto bid = generate_candidate(f.reg.at("M2"), req, env, bus);
  REQUIRE(bid.candidates.size() == 1);
  const auto& c = bid.candidates.front();
  REQUIRE(c.events.size() == 3);
  CHECK(c.events[0].event == mv("Entry", "M2"));
  CHECK(c.events[0].resource == "R1");
  CHECK(c.events[1].event == op("P1", "M2", "raw", "P1"));
  CHECK(c.events[1].resource == "M2");
  CHECK(c.events[2].event == mv("M2", "Exit"));
  CHECK(apply_sequence(req.x_prior, c.specs()) == ProductState{"Exit", "P1"});

  CHECK(c.events[0].start == 10);
  CHECK(c.events[0].end == 30);
  CHECK(c.events[1].start == 30);
  CHECK(c.events[1].end == 80);
  CHECK(c.events[2].start == 80);
  CHECK(c.events[2].end == 100);
  CHECK(c.completion() == 100);

  // One collaborative robot, asked and answering.
  CHECK(bid.messages == 2);
  CHECK(bus.count(MessageKind::CollabRequest) == 1);
}

TEST_CASE("generate_candidate: no robot reaches the bidder") {
  TwoMachines f(false);
  auto env = f.env();
  const auto req = f.request(env);
  MessageBus bus;
  CHECK(generate_candidate(f.reg.at("M2"), req, env, bus).candidates.empty());
}

TEST_CASE("generate_candidate: the only robot is down") {
  TwoMachines f;
  f.status["R1"].break_down(5000);
  auto env = f.env();
  const auto req = f.request(env);
  MessageBus bus;
  const auto bid = generate_candidate(f.reg.at("M2"), req, env, bus);
  CHECK(bid.candidates.empty());
  CHECK(bid.messages == 0);
}

TEST_CASE("generate_candidate: transport span") {
  Registry reg;
  reg.add(tiny::machine("M1", {"P1"}));
  reg.add(tiny::machine("M2", {"P2"}));
  reg.add(tiny::robot("R1", {"M1", "M2"}));
  reg.add(tiny::robot("R2", {"M1", "M2"}));
  reg.add(tiny::robot("R3", {"M1", "Exit"}));
  Plan plan;
  tiny::add_resources(plan, reg);
  plan.add_product(1, {"M1", "P1"}, 0);
  const auto uid = plan.append(at(mv("M1", "M2"), 1, "R1", 0, 20));
  plan.append(at(op("P2", "M2", "P1", "P1+P2"), 1, "M2", 20, 70));
  std::map<ResourceId, ResourceStatus> status;
  status["R1"].break_down(1000);
  RepairEnv env{plan, reg, status, 10, 0, kInfinite, 2, {}};

  const auto remaining = plan.remaining_schedule(1);
  const auto span = replacement_span(plan.entry(uid), remaining, "");
  auto req = make_request(env, plan.entry(uid), span, remaining);
  plan.detach(uid);

  MessageBus bus;
  const auto bid = generate_candidate(reg.at("R2"), req, env, bus);
  REQUIRE(bid.candidates.size() == 1);
  CHECK(bid.candidates[0].events.size() == 1);
  CHECK(bid.candidates[0].events[0].resource == "R2");
  CHECK(generate_candidate(reg.at("R3"), req, env, bus).candidates.empty());
}

TEST_CASE("candidate starts respect precedence and transitions") {
  TwoMachines f;
  f.plan.add_product(2, {"Entry", "raw"}, 0);
  f.plan.append(at(mv("Entry", "M2"), 2, "R1", 100, 120));
  f.plan.append(at(op("P1", "M2", "raw", "P1"), 2, "M2", 120, 170));
  f.plan.append(at(mv("M2", "Exit"), 2, "R1", 170, 190));
  auto env = f.env();
  const auto req = f.request(env);
  MessageBus bus;
  const auto bid = generate_candidate(f.reg.at("M2"), req, env, bus);
  for (const auto& c : bid.candidates) {
    CHECK(apply_sequence(req.x_prior, c.specs()) == req.x_post);
    for (std::size_t i = 1; i < c.events.size(); ++i)
      CHECK(c.events[i - 1].end <= c.events[i].start);
    CHECK(c.events.front().start >= req.requested_time);
  }
}
