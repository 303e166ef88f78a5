#pragma once

// Exhaustive tick scan for the one-shift insertion rule. Tries every start
// and every insertion position, rebuilds the timeline and re-checks it.

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "resched/schedule.hpp"

namespace oracle {

using resched::BusySpan;
using resched::Tick;

struct ScanResult {
  Tick start = 0;
  std::optional<std::size_t> shifted;  // index into the start-ordered spans
  Tick shifted_to = 0;
  Tick t_max = resched::kInfinite;
};

// Spans must be start-ordered. The new event goes right before spans[k]
// (k == size: after all of them). Idle time begins no earlier than `from`.
// `in_window` also requires the start to lie in the idle time before
// spans[k]; t_max is measured without it.
inline bool admissible(const std::vector<BusySpan>& spans, std::size_t k, Tick s, Tick dur,
                       Tick delta, Tick horizon, Tick from, std::optional<Tick>* moved_to,
                       bool in_window = true) {
  const Tick prev_end = k == 0 ? from : std::max(from, spans[k - 1].end);
  if (k < spans.size() && spans[k].start <= prev_end) return false;  // no idle time here
  if (s < prev_end + delta) return false;
  if (in_window && k < spans.size() && s > spans[k].start) return false;

  struct Seg {
    Tick lo, hi;
  };
  std::vector<Seg> line{{s, s + dur}};
  *moved_to = std::nullopt;
  for (std::size_t i = k; i < spans.size(); ++i) {
    Seg seg{spans[i].start, spans[i].end};
    if (i == k && seg.lo < line.back().hi + delta) {
      const Tick len = seg.hi - seg.lo;
      seg.lo = line.back().hi + delta;
      seg.hi = seg.lo + len;
      if (seg.hi > spans[i].latest_end) return false;
      *moved_to = seg.lo;
    }
    line.push_back(seg);
  }
  for (std::size_t i = 1; i < line.size(); ++i)
    if (line[i].lo < line[i - 1].hi + delta) return false;
  const bool tail_changed = line.size() <= 2;
  if (tail_changed && !resched::is_infinite(horizon) && line.back().hi + delta > horizon)
    return false;
  return true;
}

inline std::optional<ScanResult> scan(const std::vector<BusySpan>& spans, Tick t, Tick delta,
                                      Tick dur, Tick horizon, Tick from = 0) {
  for (Tick s = t; s <= horizon; ++s) {
    for (std::size_t k = 0; k <= spans.size(); ++k) {
      std::optional<Tick> moved;
      if (!admissible(spans, k, s, dur, delta, horizon, from, &moved)) continue;
      ScanResult r;
      r.start = s;
      if (moved) {
        r.shifted = k;
        r.shifted_to = *moved;
      }
      if (k < spans.size()) {
        Tick last = s;
        std::optional<Tick> ignored;
        while (last + 1 <= horizon &&
               admissible(spans, k, last + 1, dur, delta, horizon, from, &ignored, false))
          ++last;
        r.t_max = last;
      }
      return r;
    }
  }
  return std::nullopt;
}

// Random start-ordered busy line with a request against it.
struct Case {
  std::vector<BusySpan> busy;
  Tick delta = 0;
  Tick horizon = 0;
  Tick from = 0;
  Tick t = 0;
  Tick dur = 1;
};

inline Case random_case(std::mt19937_64& rng) {
  auto pick = [&](Tick lo, Tick hi) { return std::uniform_int_distribution<Tick>(lo, hi)(rng); };
  static const Tick deltas[] = {0, 1, 10};
  Case in;
  in.delta = deltas[pick(0, 2)];
  in.horizon = pick(20, 200);
  const int n = static_cast<int>(pick(0, 6));
  Tick cursor = pick(0, 15);
  for (int i = 0; i < n; ++i) {
    const Tick len = pick(1, 30);
    if (cursor + len + in.delta > in.horizon) break;
    BusySpan b{cursor, cursor + len, cursor + len};
    switch (pick(0, 2)) {
      case 0: break;
      case 1: b.latest_end = b.end + pick(0, 60); break;
      default: b.latest_end = resched::kInfinite;
    }
    in.busy.push_back(b);
    cursor = b.end + std::max<Tick>(in.delta, 1) + pick(0, 25);
  }
  in.from = pick(0, 3) == 0 ? 0 : pick(0, in.horizon / 2);
  in.t = pick(in.from, in.horizon);
  in.dur = pick(1, 40);
  return in;
}

}  // namespace oracle
