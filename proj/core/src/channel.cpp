#include "dcfsim/channel.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <stdexcept>

namespace dcfsim {

void ChannelParams::validate() const {
    if (!(tau_g_s > 0) || !(tau_b_s > 0))
        throw std::invalid_argument("channel: tau_g and tau_b must be > 0");
    if (!(p_g >= 0) || !(p_b <= 1) || p_g > p_b)
        throw std::invalid_argument("channel: need 0 <= p_g <= p_b <= 1");
}

GilbertElliott::GilbertElliott(ChannelParams params, RngStream& sojourns, ChannelState initial,
                               SimTime retention)
    : params_(params), rng_(sojourns), retention_(retention), state_(initial) {
    params_.validate();
    transitions_.push_back({SimTime::zero(), initial});
    next_transition_ = draw_sojourn(initial);
}

SimTime GilbertElliott::draw_sojourn(ChannelState s) {
    double mean = s == ChannelState::Good ? params_.tau_g_s : params_.tau_b_s;
    SimTime d = SimTime::seconds(rng_.exponential(mean));
    // Zero-length sojourns would break strict Good/Bad alternation.
    return max(d, SimTime::micros(1));
}

void GilbertElliott::advance(SimTime t, SimTime keep_from) {
    while (next_transition_ <= t) {
        state_ = state_ == ChannelState::Good ? ChannelState::Bad : ChannelState::Good;
        transitions_.push_back({next_transition_, state_});
        next_transition_ = next_transition_ + draw_sojourn(state_);
    }
    advanced_to_ = max(advanced_to_, t);
    SimTime prune_to = min(advanced_to_ - retention_, keep_from);
    while (transitions_.size() > 1 && transitions_[1].at <= prune_to) transitions_.pop_front();
    history_start_ = max(history_start_, transitions_.front().at);
}

ChannelState GilbertElliott::state_at(SimTime t) {
    if (t < history_start_)
        throw std::logic_error("GilbertElliott::state_at: query before retained history");
    if (t >= advanced_to_) advance(t, t);
    for (auto it = transitions_.rbegin(); it != transitions_.rend(); ++it)
        if (it->at <= t) return it->entered;
    return transitions_.front().entered;
}

std::vector<GilbertElliott::Segment> GilbertElliott::segments(SimTime begin, SimTime end) {
    if (begin > end) throw std::logic_error("GilbertElliott::segments: begin > end");
    if (begin < history_start_)
        throw std::logic_error("GilbertElliott::segments: query before retained history");
    advance(end, begin);

    std::vector<Segment> out;
    if (begin == end) return out;
    // Locate the transition at or before begin, then sweep forward.
    std::size_t i = transitions_.size();
    while (i > 0 && transitions_[i - 1].at > begin) --i;
    if (i > 0) --i;
    SimTime cursor = begin;
    ChannelState cur = transitions_[i].entered;
    for (++i; i < transitions_.size() && cursor < end; ++i) {
        SimTime at = transitions_[i].at;
        if (at <= cursor) {
            cur = transitions_[i].entered;
            continue;
        }
        SimTime stop = min(at, end);
        out.push_back({cur, cursor, stop});
        cursor = stop;
        cur = transitions_[i].entered;
    }
    if (cursor < end) out.push_back({cur, cursor, end});
    return out;
}

void FecConfig::validate() const {
    if (!(code_rate > 0) || !(code_rate < 1))
        throw std::invalid_argument("fec: code_rate must lie in (0, 1)");
    if (symbol_bits <= 0 || block_symbols <= 0)
        throw std::invalid_argument("fec: symbol_bits and block_symbols must be > 0");
    if (data_symbols_per_block() <= 0 || data_symbols_per_block() >= block_symbols)
        throw std::invalid_argument("fec: code_rate leaves no room for data or parity");
    if (feedback_delay_s < 0) throw std::invalid_argument("fec: feedback_delay must be >= 0");
}

int FecConfig::data_symbols_per_block() const {
    return static_cast<int>(std::lround(block_symbols * code_rate));
}

int FecConfig::correctable_symbols() const {
    return (block_symbols - data_symbols_per_block()) / 2;
}

namespace {

/// P(X > t) for X ~ Binomial(m, q).
double binomial_tail_gt(std::int64_t m, int t, double q) {
    if (t < 0) return 1.0;
    if (t >= m) return 0.0;
    if (q <= 0.0) return 0.0;
    if (q >= 1.0) return 1.0;
    return boost::math::ibeta(static_cast<double>(t + 1), static_cast<double>(m - t), q);
}

// Cumulative-rounded partition of `total` units over the time segments, so
// the per-segment counts always sum to total.
std::vector<std::int64_t> partition_by_time(const std::vector<GilbertElliott::Segment>& segs,
                                            SimTime begin, SimTime duration, std::int64_t total) {
    std::vector<std::int64_t> counts(segs.size());
    std::int64_t prev = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        std::int64_t cum = total;
        if (i + 1 < segs.size()) {
            double frac =
                static_cast<double>((segs[i].end - begin).us) / static_cast<double>(duration.us);
            cum = std::llround(frac * static_cast<double>(total));
            if (cum < prev) cum = prev;
            if (cum > total) cum = total;
        }
        counts[i] = cum - prev;
        prev = cum;
    }
    return counts;
}

double lchoose(double n, double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// P(sum of independent Binomial(m_i, q_i) components <= t) via truncated
// convolution of the first t+1 pmf terms.
double mixture_le(const std::vector<std::pair<std::int64_t, double>>& comps, int t) {
    std::vector<double> dist(static_cast<std::size_t>(t) + 1, 0.0);
    dist[0] = 1.0;
    for (auto [m, q] : comps) {
        if (m == 0 || q <= 0.0) continue;
        if (q >= 1.0) {
            if (m > t) return 0.0;
            std::vector<double> shifted(static_cast<std::size_t>(t) + 1, 0.0);
            for (std::size_t j = static_cast<std::size_t>(m); j <= static_cast<std::size_t>(t); ++j)
                shifted[j] = dist[j - m];
            dist.swap(shifted);
            continue;
        }
        std::size_t terms = static_cast<std::size_t>(std::min<std::int64_t>(m, t)) + 1;
        std::vector<double> pmf(terms);
        double lq = std::log(q), lnq = std::log1p(-q);
        for (std::size_t j = 0; j < terms; ++j) {
            double lj = lchoose(static_cast<double>(m), static_cast<double>(j)) +
                        static_cast<double>(j) * lq +
                        static_cast<double>(m - static_cast<std::int64_t>(j)) * lnq;
            pmf[j] = std::exp(lj);
        }
        std::vector<double> next(static_cast<std::size_t>(t) + 1, 0.0);
        for (int a = 0; a <= t; ++a) {
            if (dist[a] == 0.0) continue;
            for (std::size_t b = 0; b < pmf.size() && a + static_cast<std::int64_t>(b) <= t; ++b)
                next[a + b] += dist[a] * pmf[b];
        }
        dist.swap(next);
    }
    double s = 0.0;
    for (double v : dist) s += v;
    return std::min(1.0, s);
}

}  // namespace

double block_failure_prob(double p_symbol, int n, int t) {
    if (!(p_symbol >= 0.0) || !(p_symbol <= 1.0))
        throw std::invalid_argument("block_failure_prob: p_symbol outside [0,1]");
    return binomial_tail_gt(n, t, p_symbol);
}

Channel::Channel(ChannelParams params, FecConfig fec, RngStream& process_rng, RngStream& noise_rng,
                 ChannelState initial)
    : params_(params),
      fec_(fec),
      process_(params, process_rng, initial,
               max(SimTime::seconds(2.0), SimTime::seconds(4.0 * fec.feedback_delay_s))),
      noise_(noise_rng) {
    fec_.validate();
}

bool Channel::fec_decision(SimTime start) {
    if (fec_.policy == FecConfig::Policy::Off) return false;
    SimTime lookup = start - SimTime::seconds(fec_.feedback_delay_s);
    if (lookup < SimTime::zero()) lookup = SimTime::zero();
    return process_.state_at(lookup) == ChannelState::Bad;
}

std::int64_t Channel::bits_on_air(std::int64_t payload_bits, bool fec_applied) const {
    if (payload_bits <= 0) throw std::invalid_argument("bits_on_air: payload must be > 0");
    if (!fec_applied) return payload_bits;
    const std::int64_t sb = fec_.symbol_bits;
    const std::int64_t n = fec_.block_symbols;
    const std::int64_t k = fec_.data_symbols_per_block();
    std::int64_t data_symbols = (payload_bits + sb - 1) / sb;
    std::int64_t on_air_symbols = (data_symbols * n + k - 1) / k;  // ceil(data * n / k)
    return on_air_symbols * sb;
}

double Channel::corruption_prob_uncoded(const std::vector<GilbertElliott::Segment>& segs,
                                        SimTime begin, SimTime duration, std::int64_t bits) const {
    auto counts = partition_by_time(segs, begin, duration, bits);
    double log_ok = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (counts[i] == 0) continue;
        double p = params_.ber(segs[i].state);
        if (p >= 1.0) return 1.0;
        log_ok += static_cast<double>(counts[i]) * std::log1p(-p);
    }
    return -std::expm1(log_ok);
}

double Channel::corruption_prob_coded(const std::vector<GilbertElliott::Segment>& segs,
                                      SimTime begin, SimTime duration, std::int64_t data_symbols,
                                      std::int64_t on_air_symbols) const {
    const int n = fec_.block_symbols;
    const int k = fec_.data_symbols_per_block();
    const int t = fec_.correctable_symbols();
    const std::int64_t blocks = (data_symbols + k - 1) / k;

    auto counts = partition_by_time(segs, begin, duration, on_air_symbols);
    // A symbol errs iff any of its bits does.
    std::vector<double> q(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i)
        q[i] = -std::expm1(fec_.symbol_bits * std::log1p(-params_.ber(segs[i].state)));

    // Blocks tile the on-air symbol stream; every block carries n symbols
    // except the trailing shortened one, which keeps full correction power.
    double log_all_blocks_ok = 0.0;
    std::size_t seg = 0;
    std::int64_t left_in_seg = counts.empty() ? 0 : counts[0];
    for (std::int64_t b = 0; b < blocks; ++b) {
        std::int64_t block_size =
            b + 1 == blocks ? on_air_symbols - n * (blocks - 1) : static_cast<std::int64_t>(n);
        std::vector<std::pair<std::int64_t, double>> comps;
        std::int64_t need = block_size;
        while (need > 0) {
            while (seg < counts.size() && left_in_seg == 0) {
                ++seg;
                if (seg < counts.size()) left_in_seg = counts[seg];
            }
            if (seg >= counts.size()) break;
            std::int64_t take = std::min(need, left_in_seg);
            if (take > 0) comps.emplace_back(take, q[seg]);
            left_in_seg -= take;
            need -= take;
        }
        double pfail = comps.size() == 1 ? binomial_tail_gt(comps[0].first, t, comps[0].second)
                                         : std::max(0.0, 1.0 - mixture_le(comps, t));
        if (pfail >= 1.0) return 1.0;
        log_all_blocks_ok += std::log1p(-pfail);
    }
    return -std::expm1(log_all_blocks_ok);
}

TransmissionOutcome Channel::transmit(std::int64_t payload_bits, SimTime start, double rate_bps,
                                      SimTime phy_overhead, bool fec_applied) {
    if (payload_bits <= 0) throw std::invalid_argument("Channel::transmit: bits must be > 0");
    if (!(rate_bps > 0)) throw std::invalid_argument("Channel::transmit: rate must be > 0");

    TransmissionOutcome out;
    out.bits_on_air = bits_on_air(payload_bits, fec_applied);
    SimTime duration = SimTime::seconds(static_cast<double>(out.bits_on_air) / rate_bps);
    duration = max(duration, SimTime::micros(1));
    out.airtime = phy_overhead + duration;

    SimTime window_begin = start + phy_overhead;
    SimTime window_end = window_begin + duration;
    auto segs = process_.segments(window_begin, window_end);

    auto bit_counts = partition_by_time(segs, window_begin, duration, out.bits_on_air);
    for (std::size_t i = 0; i < segs.size(); ++i)
        out.segments.push_back({segs[i].state, bit_counts[i]});

    if (!fec_applied) {
        out.corruption_prob = corruption_prob_uncoded(segs, window_begin, duration, out.bits_on_air);
    } else {
        std::int64_t sb = fec_.symbol_bits;
        std::int64_t data_symbols = (payload_bits + sb - 1) / sb;
        out.corruption_prob =
            corruption_prob_coded(segs, window_begin, duration, data_symbols, out.bits_on_air / sb);
    }
    // One draw per transmission, taken unconditionally so the noise stream
    // stays aligned across FEC modes under a shared seed.
    out.corrupted = noise_.uniform01() < out.corruption_prob;
    return out;
}

}  // namespace dcfsim
