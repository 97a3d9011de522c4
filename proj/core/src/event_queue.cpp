#include "dcfsim/event_queue.hpp"

#include <stdexcept>
#include <string>

namespace dcfsim {

EventHandle EventQueue::schedule(SimTime at, std::function<void()> fn) {
    if (at < now_)
        throw std::logic_error("EventQueue::schedule: event at t=" + std::to_string(at.us) +
                               "us lies before the clock (t=" + std::to_string(now_.us) + "us)");
    auto rec = std::make_shared<detail::EventRecord>(detail::EventRecord{std::move(fn), false});
    heap_.push(Entry{at, next_seq_++, rec});
    return EventHandle{rec};
}

std::size_t EventQueue::run_until(SimTime end) {
    std::size_t dispatched = 0;
    while (!heap_.empty() && heap_.top().at <= end) {
        Entry e = heap_.top();
        heap_.pop();
        if (e.rec->cancelled) continue;
        now_ = e.at;
        // Move the closure out so an event may safely reschedule itself.
        auto fn = std::move(e.rec->fn);
        e.rec->cancelled = true;
        fn();
        ++dispatched;
    }
    now_ = max(now_, end);
    return dispatched;
}

}  // namespace dcfsim
