#include <algorithm>
#include <cmath>
#include <vector>

#include "dcfsim/simulation.hpp"
#include "doctest.h"

using namespace dcfsim;

TEST_CASE("events at the same instant dispatch in schedule order") {
    Simulation sim(1);
    std::vector<int> order;
    sim.schedule_at(SimTime::micros(5), [&] { order.push_back(1); });
    sim.schedule_at(SimTime::micros(5), [&] { order.push_back(2); });
    sim.schedule_at(SimTime::zero(), [&] { order.push_back(0); });
    sim.run_until(SimTime::micros(10));
    CHECK(order == std::vector<int>{0, 1, 2});
}

TEST_CASE("run_until dispatches exactly the events at or before the horizon") {
    Simulation sim(1);
    int fired = 0;
    for (int s : {1, 2, 3}) sim.schedule_at(SimTime::seconds(s), [&] { ++fired; });
    CHECK(sim.run_until(SimTime::seconds(2)) == 2);
    CHECK(fired == 2);
    CHECK(sim.now() == SimTime::seconds(2));
}

TEST_CASE("empty queue still advances the clock") {
    Simulation sim(7);
    CHECK(sim.run_until(SimTime::seconds(10)) == 0);
    CHECK(sim.now() == SimTime::seconds(10));
}

TEST_CASE("cancelled events never fire") {
    Simulation sim(1);
    bool fired = false;
    auto h = sim.schedule_at(SimTime::micros(3), [&] { fired = true; });
    CHECK(h.pending());
    h.cancel();
    CHECK_FALSE(h.pending());
    sim.run_until(SimTime::micros(10));
    CHECK_FALSE(fired);
}

TEST_CASE("scheduling in the past fails loudly") {
    Simulation sim(1);
    sim.run_until(SimTime::micros(100));
    CHECK_THROWS_AS(sim.schedule_at(SimTime::micros(99), [] {}), std::logic_error);
    CHECK_NOTHROW(sim.schedule_at(SimTime::micros(100), [] {}));
}

TEST_CASE("dispatch order equals a reference sort under random schedule/cancel") {
    // Property: for any interleaving of schedule and cancel calls, the events
    // that fire do so in exactly (at, seq) order.
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        Simulation sim(trial);
        RngStream gen(trial, "test.generator");
        struct Expect {
            std::int64_t at;
            std::uint64_t seq;
            int id;
        };
        std::vector<Expect> live;
        std::vector<EventHandle> handles;
        std::vector<int> fired;
        std::uint64_t seq = 0;
        for (int i = 0; i < 200; ++i) {
            if (!handles.empty() && gen.uniform01() < 0.25) {
                auto k = static_cast<std::size_t>(gen.uniform_int(0, std::int64_t(handles.size()) - 1));
                handles[k].cancel();
                std::erase_if(live, [&](const Expect& e) { return e.id == int(k); });
            } else {
                std::int64_t at = gen.uniform_int(0, 50);
                int id = int(handles.size());
                handles.push_back(sim.schedule_at(SimTime::micros(at), [&fired, id] { fired.push_back(id); }));
                live.push_back({at, seq, id});
            }
            ++seq;
        }
        sim.run_until(SimTime::micros(60));
        std::stable_sort(live.begin(), live.end(), [](const Expect& a, const Expect& b) {
            return a.at != b.at ? a.at < b.at : a.seq < b.seq;
        });
        std::vector<int> expect;
        for (auto& e : live) expect.push_back(e.id);
        REQUIRE(fired == expect);
    }
}

TEST_CASE("identical seed gives an identical dispatch trace") {
    auto trace = [](std::uint64_t seed) {
        Simulation sim(seed);
        auto& r = sim.rng("trace");
        std::vector<std::int64_t> at;
        std::function<void()> step = [&] {
            if (at.size() >= 100) return;
            at.push_back(sim.now().us);
            sim.schedule_in(SimTime::seconds(r.exponential(0.01)), step);
        };
        sim.schedule_at(SimTime::zero(), step);
        sim.run_until(SimTime::seconds(100));
        return at;
    };
    CHECK(trace(42) == trace(42));
    CHECK(trace(42) != trace(43));
}

TEST_CASE("streams are independent: extra draws on A leave B unchanged") {
    Simulation a(99), b(99);
    auto draw = [](Simulation& s, bool interleave) {
        std::vector<std::uint64_t> out;
        for (int i = 0; i < 32; ++i) {
            if (interleave) s.rng("stream.a").next_u64();
            out.push_back(s.rng("stream.b").next_u64());
        }
        return out;
    };
    CHECK(draw(a, false) == draw(b, true));
}

TEST_CASE("exponential draw: empirical means converge to the configured mean") {
    Simulation sim(2024);
    auto& r = sim.rng("exp");
    auto mean_of = [&](double mean, int n) {
        double acc = 0;
        for (int i = 0; i < n; ++i) acc += r.exponential(mean);
        return acc / n;
    };
    CHECK(mean_of(0.1, 1'000'000) == doctest::Approx(0.1).epsilon(0.01));
    CHECK(mean_of(1.35, 1'000'000) == doctest::Approx(1.35).epsilon(0.0075));
    CHECK_THROWS_AS(r.exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(r.exponential(-1.0), std::invalid_argument);
}

TEST_CASE("inverse-CDF edge: u = 1 maps to exactly zero") {
    CHECK(RngStream::exponential_from_u(1.0, 0.5) == 0.0);
}

TEST_CASE("exponential samples are nonnegative") {
    Simulation sim(5);
    auto& r = sim.rng("exp");
    for (int i = 0; i < 10000; ++i) CHECK(r.exponential(0.01) >= 0.0);
}
