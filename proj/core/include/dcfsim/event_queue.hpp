#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <vector>

#include "dcfsim/sim_time.hpp"

namespace dcfsim {

namespace detail {
struct EventRecord {
    std::function<void()> fn;
    bool cancelled = false;
};
}  // namespace detail

/// Handle returned by EventQueue::schedule. cancel() guarantees the event
/// never fires; cancelling an already dispatched or cancelled event is a no-op.
class EventHandle {
  public:
    EventHandle() = default;
    void cancel() {
        if (auto r = rec_.lock()) r->cancelled = true;
    }
    bool pending() const {
        auto r = rec_.lock();
        return r && !r->cancelled;
    }

  private:
    friend class EventQueue;
    explicit EventHandle(std::weak_ptr<detail::EventRecord> rec) : rec_(std::move(rec)) {}
    std::weak_ptr<detail::EventRecord> rec_;
};

/// Time-ordered event queue. Events with equal timestamps dispatch in
/// schedule order: the key (at, seq) is a total order with seq issued
/// monotonically at schedule time. Cancellation is lazy; cancelled entries
/// are skipped at pop time.
class EventQueue {
  public:
    EventHandle schedule(SimTime at, std::function<void()> fn);

    /// Dispatches every pending event with at <= end, then advances the
    /// clock to end. Returns the number of events dispatched.
    std::size_t run_until(SimTime end);

    SimTime now() const { return now_; }
    std::uint64_t scheduled_count() const { return next_seq_; }

  private:
    struct Entry {
        SimTime at;
        std::uint64_t seq;
        std::shared_ptr<detail::EventRecord> rec;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.at != b.at) return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    SimTime now_{0};
    std::uint64_t next_seq_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
};

}  // namespace dcfsim
