#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "dcfsim/event_queue.hpp"
#include "dcfsim/rng.hpp"
#include "dcfsim/sim_time.hpp"

namespace dcfsim {

/// One simulation run: clock, event queue and named RNG streams.
/// Single-threaded; a fully constructed Simulation may be handed to a worker
/// thread, but one instance must never be driven from two threads at once.
class Simulation {
  public:
    explicit Simulation(std::uint64_t master_seed) : rngs_(master_seed) {}

    SimTime now() const { return queue_.now(); }

    EventHandle schedule_at(SimTime t, std::function<void()> fn) {
        return queue_.schedule(t, std::move(fn));
    }
    EventHandle schedule_in(SimTime delay, std::function<void()> fn) {
        return queue_.schedule(now() + delay, std::move(fn));
    }

    std::size_t run_until(SimTime end) { return queue_.run_until(end); }

    RngStream& rng(std::string_view name) { return rngs_.stream(name); }
    std::uint64_t seed() const { return rngs_.master_seed(); }

  private:
    EventQueue queue_;
    RngRegistry rngs_;
};

}  // namespace dcfsim
