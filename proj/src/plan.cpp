#include "resched/plan.hpp"

#include <algorithm>
#include <queue>

namespace resched {

void Plan::add_resource(const ResourceId& id, bool machine) {
  machine_[id] = machine;
  by_resource_.try_emplace(id);
}

void Plan::add_product(ProductId id, ProductState initial, Tick release) {
  tracks_[id] = Track{std::move(initial), release, {}};
}

EntryId Plan::append(ScheduledEvent e) {
  if (!tracks_.contains(e.product))
    throw Error("append: unknown product " + std::to_string(e.product));
  if (!machine_.contains(e.resource)) throw Error("append: unknown resource " + e.resource);
  e.uid = next_uid_++;
  const EntryId uid = e.uid;
  tracks_[e.product].sequence.push_back(uid);
  entries_.emplace(uid, std::move(e));
  attach(uid);
  return uid;
}

const ScheduledEvent& Plan::entry(EntryId uid) const {
  auto it = entries_.find(uid);
  if (it == entries_.end()) throw EventNotFound("no entry " + std::to_string(uid));
  return it->second;
}

std::vector<ResourceId> Plan::resources() const {
  std::vector<ResourceId> out;
  for (const auto& [id, m] : machine_) out.push_back(id);
  return out;
}

std::vector<ProductId> Plan::products() const {
  std::vector<ProductId> out;
  for (const auto& [id, t] : tracks_) out.push_back(id);
  return out;
}

bool Plan::is_machine(const ResourceId& id) const {
  auto it = machine_.find(id);
  return it != machine_.end() && it->second;
}

const Plan::Track& Plan::track(ProductId id) const {
  auto it = tracks_.find(id);
  if (it == tracks_.end()) throw EventNotFound("no product " + std::to_string(id));
  return it->second;
}

const std::vector<EntryId>& Plan::timeline(const ResourceId& id) const {
  static const std::vector<EntryId> empty;
  auto it = by_resource_.find(id);
  return it == by_resource_.end() ? empty : it->second;
}

ResourceSchedule Plan::resource_schedule(const ResourceId& id) const {
  ResourceSchedule rs{id, is_machine(id), {}};
  for (EntryId uid : timeline(id)) rs.entries.push_back(entries_.at(uid));
  return rs;
}

ProductSchedule Plan::product_schedule(ProductId id) const {
  const Track& t = track(id);
  ProductSchedule ps{id, t.initial, t.release, {}};
  for (EntryId uid : t.sequence) ps.entries.push_back(entries_.at(uid));
  return ps;
}

ProductSchedule Plan::remaining_schedule(ProductId id) const {
  const Track& t = track(id);
  ProductSchedule ps{id, t.initial, t.release, {}};
  std::size_t k = 0;
  for (; k < t.sequence.size() && started(t.sequence[k]); ++k) {
    const auto& e = entries_.at(t.sequence[k]);
    ps.initial = apply_transition(ps.initial, e.event);
    ps.ready = e.end;
  }
  for (; k < t.sequence.size(); ++k) ps.entries.push_back(entries_.at(t.sequence[k]));
  return ps;
}

std::vector<ResourceSchedule> Plan::all_resource_schedules() const {
  std::vector<ResourceSchedule> out;
  for (const auto& [id, m] : machine_) out.push_back(resource_schedule(id));
  return out;
}

std::vector<ProductSchedule> Plan::all_product_schedules() const {
  std::vector<ProductSchedule> out;
  for (const auto& [id, t] : tracks_) out.push_back(product_schedule(id));
  return out;
}

std::vector<BusySpan> Plan::busy_spans(const ResourceId& id,
                                       std::vector<EntryId>* uids) const {
  std::vector<BusySpan> out;
  if (uids) uids->clear();
  for (EntryId uid : timeline(id)) {
    const auto& e = entries_.at(uid);
    Tick latest = kInfinite;
    if (started(uid)) {
      latest = e.end;
    } else if (auto succ = successor(uid)) {
      latest = attached(*succ) ? std::max(e.end, entries_.at(*succ).start) : e.end;
    }
    out.push_back({e.start, e.end, latest});
    if (uids) uids->push_back(uid);
  }
  return out;
}

void Plan::mark_started(EntryId uid, Tick start, Tick end) {
  auto& e = entries_.at(uid);
  const bool on_timeline = attached(uid);
  if (on_timeline) detach(uid);
  e.start = start;
  e.end = end;
  if (on_timeline) attach(uid);
  started_.insert(uid);
}

void Plan::attach(EntryId uid) {
  detached_.erase(uid);
  const auto& e = entries_.at(uid);
  auto& line = by_resource_[e.resource];
  auto pos = std::upper_bound(line.begin(), line.end(), e.start,
                              [&](Tick s, EntryId other) { return s < entries_.at(other).start; });
  line.insert(pos, uid);
}

void Plan::detach(EntryId uid) {
  if (detached_.contains(uid)) return;
  auto& line = by_resource_[entry(uid).resource];
  line.erase(std::remove(line.begin(), line.end(), uid), line.end());
  detached_.insert(uid);
}

void Plan::retime(EntryId uid, Tick start) {
  auto& e = entries_.at(uid);
  const Tick len = e.end - e.start;
  const bool on_timeline = attached(uid);
  if (on_timeline) detach(uid);
  e.start = start;
  e.end = start + len;
  if (on_timeline) attach(uid);
}

void Plan::erase(EntryId uid) {
  detach(uid);
  detached_.erase(uid);
  started_.erase(uid);
  done_.erase(uid);
  entries_.erase(uid);
}

std::size_t Plan::position(ProductId pid, EntryId uid) const {
  const auto& seq = track(pid).sequence;
  auto it = std::find(seq.begin(), seq.end(), uid);
  if (it == seq.end()) throw EventNotFound("entry " + std::to_string(uid) + " not in product");
  return static_cast<std::size_t>(it - seq.begin());
}

std::vector<EntryId> Plan::replace_span(ProductId pid, const std::vector<EntryId>& old,
                                        std::vector<ScheduledEvent> fresh) {
  auto& seq = tracks_.at(pid).sequence;
  std::size_t at = seq.size();
  if (!old.empty()) {
    at = position(pid, old.front());
    for (std::size_t i = 0; i < old.size(); ++i) {
      if (at + i >= seq.size() || seq[at + i] != old[i])
        throw Error("replace_span: span is not contiguous");
    }
    seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(at),
              seq.begin() + static_cast<std::ptrdiff_t>(at + old.size()));
    for (EntryId uid : old) erase(uid);
  }
  std::vector<EntryId> ids;
  for (auto& e : fresh) {
    e.uid = next_uid_++;
    e.product = pid;
    ids.push_back(e.uid);
    entries_.emplace(e.uid, std::move(e));
  }
  seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(at), ids.begin(), ids.end());
  for (EntryId uid : ids) attach(uid);
  return ids;
}

std::vector<EntryId> Plan::settle(Tick delta) {
  std::map<ResourceId, Tick> free;
  for (EntryId uid : started_) {
    if (!entries_.contains(uid) || !attached(uid)) continue;
    const auto& e = entries_.at(uid);
    auto [it, fresh] = free.emplace(e.resource, e.end);
    if (!fresh) it->second = std::max(it->second, e.end);
  }

  using Key = std::pair<Tick, EntryId>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  std::map<EntryId, EntryId> next;
  for (const auto& [pid, t] : tracks_) {
    Tick after = 0;
    std::optional<EntryId> first;
    for (std::size_t i = 0; i < t.sequence.size(); ++i) {
      const EntryId uid = t.sequence[i];
      if (started(uid)) {
        after = entries_.at(uid).end;
        continue;
      }
      if (!first) {
        first = uid;
        ready.push({std::max(entries_.at(uid).start, after), uid});
      }
      if (i + 1 < t.sequence.size()) next[uid] = t.sequence[i + 1];
    }
  }

  std::vector<EntryId> moved;
  while (!ready.empty()) {
    const auto [earliest, uid] = ready.top();
    ready.pop();
    auto& e = entries_.at(uid);
    Tick s = earliest;
    if (attached(uid)) {
      if (auto f = free.find(e.resource); f != free.end())
        s = std::max(s, f->second + (is_machine(e.resource) ? delta : 0));
    }
    if (s != e.start) {
      const Tick len = e.duration();
      e.start = s;
      e.end = s + len;
      moved.push_back(uid);
    }
    if (attached(uid)) free[e.resource] = std::max(free[e.resource], e.end);
    if (auto n = next.find(uid); n != next.end())
      ready.push({std::max(entries_.at(n->second).start, e.end), n->second});
  }

  for (auto& [id, line] : by_resource_)
    std::stable_sort(line.begin(), line.end(), [&](EntryId a, EntryId b) {
      return entries_.at(a).start < entries_.at(b).start;
    });
  return moved;
}

std::vector<EntryId> Plan::cancel_pending(ProductId pid) {
  auto& seq = tracks_.at(pid).sequence;
  std::vector<EntryId> dropped;
  for (EntryId uid : seq)
    if (!started(uid)) dropped.push_back(uid);
  for (EntryId uid : dropped) {
    seq.erase(std::find(seq.begin(), seq.end(), uid));
    erase(uid);
  }
  return dropped;
}

std::optional<EntryId> Plan::successor(EntryId uid) const {
  const auto& seq = track(entry(uid).product).sequence;
  auto it = std::find(seq.begin(), seq.end(), uid);
  if (it == seq.end() || std::next(it) == seq.end()) return std::nullopt;
  return *std::next(it);
}

std::optional<EntryId> Plan::predecessor(EntryId uid) const {
  const auto& seq = track(entry(uid).product).sequence;
  auto it = std::find(seq.begin(), seq.end(), uid);
  if (it == seq.end() || it == seq.begin()) return std::nullopt;
  return *std::prev(it);
}

}  // namespace resched
