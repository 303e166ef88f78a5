#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "resched/types.hpp"

namespace resched {

enum class MessageKind {
  DirectoryQuery,
  DirectoryReply,
  BidRequest,
  BidResponse,
  CollabRequest,
  CollabResponse,
  PropagationRequest,
  PropagationResponse,
  Inform,
  RemovalNotice,
  CentralQuery,
};

std::string to_string(MessageKind k);

struct Message {
  Tick tick = 0;
  std::string from;
  std::string to;
  MessageKind kind = MessageKind::BidRequest;
  std::size_t payload = 1;
};

/// In-memory ordered bus. Delivery is in enqueue order; every message
/// counts as one communication.
class MessageBus {
 public:
  void send(Message m);
  void send(Tick tick, const std::string& from, const std::string& to, MessageKind kind,
            std::size_t payload = 1);

  /// Pops the oldest undelivered message; false when empty.
  bool deliver(Message& out);
  std::size_t pending() const { return queue_.size(); }

  std::size_t count() const { return total_; }
  std::size_t count(MessageKind k) const;

  void set_tracing(bool on) { tracing_ = on; }
  const std::vector<Message>& trace() const { return trace_; }
  void dump(std::ostream& os) const;

 private:
  std::deque<Message> queue_;
  std::map<MessageKind, std::size_t> by_kind_;
  std::size_t total_ = 0;
  bool tracing_ = false;
  std::vector<Message> trace_;
};

}  // namespace resched
