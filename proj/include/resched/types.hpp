#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace resched {

/// Simulator time unit. Non-negative in every schedule.
using Tick = std::int64_t;

/// Sentinel for "no bound". Kept well below the numeric limit so that
/// a handful of additions and subtractions cannot overflow.
inline constexpr Tick kInfinite = std::numeric_limits<Tick>::max() / 4;

inline constexpr bool is_infinite(Tick t) { return t >= kInfinite; }

using ResourceId = std::string;
using ProductId = int;
using EntryId = std::uint64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InapplicableEvent : public Error {
 public:
  InapplicableEvent(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class NoFeasibleSlot : public Error {
 public:
  using Error::Error;
};

class EventNotFound : public Error {
 public:
  using Error::Error;
};

class EmptyCluster : public Error {
 public:
  using Error::Error;
};

class InvalidNominalOps : public Error {
 public:
  using Error::Error;
};

class InfeasibleScenario : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace resched
