#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>

namespace dcfsim {

/// A named pseudo-random stream. Streams are seeded from (master seed, name)
/// so adding draws on one stream never perturbs another: the channel
/// realization stays fixed when a traffic source is added, which is what
/// makes sweep cells comparable under a common seed.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::string name);

    const std::string& name() const { return name_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform01();

    /// Uniform integer in [lo, hi], both inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    bool bernoulli(double p);

    /// Exponential with the given mean via inverse CDF.
    /// Rejects non-positive means.
    double exponential(double mean);

    /// Bounded Pareto: scale / u^(1/shape), truncated at cap.
    double pareto_bounded(double shape, double scale, double cap);

    /// Inverse-CDF kernel: u = 1 maps to exactly 0.
    static double exponential_from_u(double u, double mean);

  private:
    std::string name_;
    std::mt19937_64 gen_;
};

/// Lazily creates one RngStream per name, all derived from one master seed.
class RngRegistry {
  public:
    explicit RngRegistry(std::uint64_t master_seed) : master_seed_(master_seed) {}

    RngStream& stream(std::string_view name);
    std::uint64_t master_seed() const { return master_seed_; }

  private:
    std::uint64_t master_seed_;
    // std::map: deterministic iteration and stable addresses are both wanted.
    std::map<std::string, std::unique_ptr<RngStream>, std::less<>> streams_;
};

}  // namespace dcfsim
