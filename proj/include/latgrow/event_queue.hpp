#pragma once

#include <cstdint>
#include <queue>
#include <vector>

namespace latgrow {

/// Time-ordered pending-event store. Equal times pop in insertion order,
/// so a run is a deterministic function of its random draws.
template <typename Payload, typename Time = double>
class EventQueue {
 public:
  struct Entry {
    Time time;
    std::uint64_t seq;
    Payload payload;
  };

  void push(Time time, Payload payload) { heap_.push(Entry{time, next_seq_++, std::move(payload)}); }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Entry& top() const { return heap_.top(); }
  Entry pop() {
    Entry e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace latgrow
