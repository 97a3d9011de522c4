#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "dcfsim/rng.hpp"
#include "dcfsim/sim_time.hpp"

namespace dcfsim {

enum class ChannelState { Good, Bad };

/// Two-state burst-error channel parameters: mean sojourn times and the
/// bit-error probability holding in each state.
struct ChannelParams {
    double tau_g_s = 0.1;
    double tau_b_s = 0.0333;
    double p_g = 1e-6;
    double p_b = 1e-2;

    void validate() const;
    double ber(ChannelState s) const { return s == ChannelState::Good ? p_g : p_b; }
    /// Stationary fraction of time spent in Bad: tau_b / (tau_g + tau_b).
    double stationary_bad_fraction() const { return tau_b_s / (tau_g_s + tau_b_s); }
};

/// Alternating Good/Bad renewal process with exponentially distributed
/// sojourns. Advances lazily as queried; a bounded window of past
/// transitions is retained so delayed lookups (receiver feedback) and
/// overlapping transmissions can read slightly into the past.
class GilbertElliott {
  public:
    struct Transition {
        SimTime at;
        ChannelState entered;
    };

    GilbertElliott(ChannelParams params, RngStream& sojourns,
                   ChannelState initial = ChannelState::Good,
                   SimTime retention = SimTime::seconds(2.0));

    /// State holding at t. Advances the process; t must not lie before the
    /// retained history window.
    ChannelState state_at(SimTime t);

    struct Segment {
        ChannelState state;
        SimTime begin;
        SimTime end;
    };
    /// Partition of [begin, end) by channel state. Advances through end.
    std::vector<Segment> segments(SimTime begin, SimTime end);

    SimTime advanced_to() const { return advanced_to_; }
    SimTime history_start() const { return history_start_; }
    /// Retained transitions, oldest first (diagnostics and tests).
    const std::deque<Transition>& transitions() const { return transitions_; }

  private:
    void advance(SimTime t, SimTime keep_from);
    SimTime draw_sojourn(ChannelState s);

    ChannelParams params_;
    RngStream& rng_;
    SimTime retention_;
    std::deque<Transition> transitions_;  // first entry is the state at history_start_
    ChannelState state_;
    SimTime advanced_to_{0};
    SimTime next_transition_{0};
    SimTime history_start_{0};
};

/// Reed-Solomon style block code configuration for channel-adaptive FEC.
/// The policy decides *when* frames are coded; the block geometry decides
/// the airtime expansion and the per-block failure model.
struct FecConfig {
    enum class Policy { Off, AdaptiveOnBad };

    Policy policy = Policy::Off;
    double code_rate = 0.71;
    int symbol_bits = 8;
    int block_symbols = 255;  // n
    double feedback_delay_s = 0.0;

    void validate() const;
    /// Data symbols per block: k = round(n * code_rate).
    int data_symbols_per_block() const;
    /// Correctable symbols per block: t = floor((n - k) / 2).
    int correctable_symbols() const;
};

/// Probability that a block of n symbols with independent symbol error
/// probability p_symbol sees more than t errors: sum_{j>t} C(n,j) p^j (1-p)^(n-j).
double block_failure_prob(double p_symbol, int n, int t);

struct TransmissionOutcome {
    bool corrupted = false;
    SimTime airtime{0};      // PHY overhead + bits_on_air at the link rate
    std::int64_t bits_on_air = 0;
    struct SegmentBits {
        ChannelState state;
        std::int64_t bits;
    };
    std::vector<SegmentBits> segments;
    double corruption_prob = 0.0;  // analytic probability the draw was taken against
};

/// One shared channel for the whole cell: the burst-error process plus the
/// per-transmission corruption decision. Corruption is sampled once per
/// frame against the exact analytic probability for the state segments the
/// frame spanned; all listeners share the outcome (common fading).
class Channel {
  public:
    Channel(ChannelParams params, FecConfig fec, RngStream& process_rng, RngStream& noise_rng,
            ChannelState initial = ChannelState::Good);

    /// Adaptive policy: true iff the state estimate available at `start`
    /// (the true state feedback_delay ago) is Bad. Off: always false.
    bool fec_decision(SimTime start);

    /// On-air bits for a frame of payload_bits. With FEC the payload expands
    /// by n/k at symbol granularity: the trailing partial block is a
    /// shortened code block, so expansion stays within one symbol of 1/rate.
    std::int64_t bits_on_air(std::int64_t payload_bits, bool fec_applied) const;

    /// Samples the corruption outcome of a transmission whose data portion
    /// starts after `phy_overhead` of preamble (preamble is not subject to
    /// the payload error lottery). Advances the channel process through the
    /// end of the transmission.
    TransmissionOutcome transmit(std::int64_t payload_bits, SimTime start, double rate_bps,
                                 SimTime phy_overhead, bool fec_applied);

    GilbertElliott& process() { return process_; }
    const ChannelParams& params() const { return params_; }
    const FecConfig& fec() const { return fec_; }

  private:
    double corruption_prob_uncoded(const std::vector<GilbertElliott::Segment>& segs,
                                   SimTime window_begin, SimTime duration,
                                   std::int64_t bits) const;
    double corruption_prob_coded(const std::vector<GilbertElliott::Segment>& segs,
                                 SimTime window_begin, SimTime duration, std::int64_t data_symbols,
                                 std::int64_t on_air_symbols) const;

    ChannelParams params_;
    FecConfig fec_;
    GilbertElliott process_;
    RngStream& noise_;
};

}  // namespace dcfsim
