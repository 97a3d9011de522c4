#include "dcfsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dcfsim {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::string name)
    : name_(std::move(name)), gen_(splitmix64(master_seed ^ fnv1a64(name_))) {}

double RngStream::uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::logic_error("RngStream::uniform_int: empty range");
    // Lemire multiply-shift; bias is < range / 2^64, irrelevant at simulation scale.
    auto range = static_cast<unsigned __int128>(hi - lo) + 1;
    auto x = static_cast<unsigned __int128>(gen_());
    return lo + static_cast<std::int64_t>((x * range) >> 64);
}

bool RngStream::bernoulli(double p) { return uniform01() < p; }

double RngStream::exponential_from_u(double u, double mean) {
    return -mean * std::log(u);
}

double RngStream::exponential(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("RngStream::exponential: mean must be > 0");
    // u uniform in (0, 1]: u = 1 yields exactly 0, u can never be 0.
    double u = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    return exponential_from_u(u, mean);
}

double RngStream::pareto_bounded(double shape, double scale, double cap) {
    if (!(shape > 0.0) || !(scale > 0.0) || !(cap >= scale))
        throw std::invalid_argument("RngStream::pareto_bounded: invalid parameters");
    double u = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    return std::min(cap, scale / std::pow(u, 1.0 / shape));
}

RngStream& RngRegistry::stream(std::string_view name) {
    auto it = streams_.find(name);
    if (it == streams_.end()) {
        auto s = std::make_unique<RngStream>(master_seed_, std::string(name));
        it = streams_.emplace(std::string(name), std::move(s)).first;
    }
    return *it->second;
}

}  // namespace dcfsim
