#pragma once

#include <cmath>
#include <compare>
#include <cstdint>

namespace dcfsim {

/// Simulation time as integer microseconds since the start of the run.
/// Integer ticks keep 802.11 timing constants (20 us slot, 10 us SIFS)
/// exact and make event ordering immune to float rounding.
struct SimTime {
    std::int64_t us = 0;

    constexpr SimTime() = default;
    constexpr explicit SimTime(std::int64_t microseconds) : us(microseconds) {}

    static constexpr SimTime zero() { return SimTime{0}; }
    static constexpr SimTime micros(std::int64_t v) { return SimTime{v}; }
    static constexpr SimTime millis(std::int64_t v) { return SimTime{v * 1000}; }
    static SimTime seconds(double s) { return SimTime{std::llround(s * 1e6)}; }

    constexpr double as_seconds() const { return static_cast<double>(us) * 1e-6; }

    friend constexpr auto operator<=>(SimTime, SimTime) = default;
    friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.us + b.us}; }
    friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.us - b.us}; }
    constexpr SimTime& operator+=(SimTime o) { us += o.us; return *this; }
    friend constexpr SimTime operator*(SimTime a, std::int64_t k) { return SimTime{a.us * k}; }
};

constexpr SimTime max(SimTime a, SimTime b) { return a < b ? b : a; }
constexpr SimTime min(SimTime a, SimTime b) { return a < b ? a : b; }

}  // namespace dcfsim
