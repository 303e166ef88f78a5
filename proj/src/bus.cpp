#include "resched/bus.hpp"

namespace resched {

std::string to_string(MessageKind k) {
  switch (k) {
    case MessageKind::DirectoryQuery: return "directory-query";
    case MessageKind::DirectoryReply: return "directory-reply";
    case MessageKind::BidRequest: return "bid-request";
    case MessageKind::BidResponse: return "bid-response";
    case MessageKind::CollabRequest: return "collab-request";
    case MessageKind::CollabResponse: return "collab-response";
    case MessageKind::PropagationRequest: return "propagation-request";
    case MessageKind::PropagationResponse: return "propagation-response";
    case MessageKind::Inform: return "inform";
    case MessageKind::RemovalNotice: return "removal-notice";
    case MessageKind::CentralQuery: return "central-query";
  }
  return "unknown";
}

void MessageBus::send(Message m) {
  ++total_;
  ++by_kind_[m.kind];
  if (tracing_) trace_.push_back(m);
  queue_.push_back(std::move(m));
}

void MessageBus::send(Tick tick, const std::string& from, const std::string& to,
                      MessageKind kind, std::size_t payload) {
  send(Message{tick, from, to, kind, payload});
}

bool MessageBus::deliver(Message& out) {
  if (queue_.empty()) return false;
  out = std::move(queue_.front());
  queue_.pop_front();
  return true;
}

std::size_t MessageBus::count(MessageKind k) const {
  auto it = by_kind_.find(k);
  return it == by_kind_.end() ? 0 : it->second;
}

void MessageBus::dump(std::ostream& os) const {
  for (const auto& m : trace_)
    os << m.tick << ' ' << m.from << ' ' << m.to << ' ' << to_string(m.kind) << ' '
       << m.payload << '\n';
}

}  // namespace resched
