#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <utility>
#include <vector>

#include "sandnet/netcore.hpp"

namespace sandnet {

// Per-neuron record of recent firing ticks, kept just long enough to
// evaluate the interval-dependent rules.
class FiringHistory {
public:
    explicit FiringHistory(std::uint32_t window) : window_(window) {}

    void record(const TickReport& report);
    // Firing ticks of `id` within the window, oldest first.
    const std::deque<std::uint64_t>& fired_ticks(NeuronId id) const;
    std::uint32_t window() const { return window_; }
    std::uint64_t last_tick() const { return last_tick_; }

private:
    std::uint32_t window_;
    std::uint64_t last_tick_ = 0;
    std::vector<std::deque<std::uint64_t>> per_neuron_;
    static const std::deque<std::uint64_t> empty_;
};

struct WeightDelta {
    std::uint32_t synapse = 0;
    double delta = 0.0;
};

// Interval-dependent weight change. dt = t_post - t_pre: positive means the
// pre neuron fired first and the synapse strengthens; negative weakens it.
// Magnitude decays exponentially with |dt| and is zero outside the window.
// dt == 0 is the co-firing rule's case and contributes nothing here.
double stdp_kernel(std::int64_t dt, const PlasticityParams& p);

// Applies the kernel to every synapse whose endpoints both fired within the
// window, pairing each firing of the current tick against the other end's
// recent history. Writes to the short-term trace, clamped to [0, s_max].
std::vector<WeightDelta> apply_temporal_plasticity(Network& net,
                                                   const FiringHistory& history);
std::vector<WeightDelta> apply_temporal_plasticity(Network& net,
                                                   const FiringHistory& history,
                                                   const PlasticityParams& params);

// Pair bookkeeping for the optional growth path of the co-firing rule.
using CofireCounts = std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>;

// Co-firing rule: every simultaneously fired pair that already converges on
// a shared downstream neuron has both convergent synapses strengthened by
// eta_cofire. With grow_new set, a pair with no shared target gets a fresh
// one once it has co-fired grow_threshold times.
std::vector<WeightDelta> apply_cofire(Network& net,
                                      const std::vector<NeuronId>& fired,
                                      const PlasticityParams& p,
                                      CofireCounts* counts = nullptr);

// Multiplies every short-term trace by exp(-1/tau_stm). Long-term weights
// are untouched.
void decay_stm(Network& net, const PlasticityParams& p);

// Moves rate*stm into ltm on every synapse (ltm clamped to w_max, the full
// moved amount leaves stm). rate must be in (0, 1].
void consolidate(Network& net, double rate);

// Step-and-learn composition used by the training procedures: advances the
// network, records firings, applies both rules, then decays the traces.
class PlasticityEngine {
public:
    PlasticityEngine(Network& net, PlasticityParams params);

    TickReport tick(const ExternalInput& external = {},
                    const PostActivationHook& hook = nullptr);
    void run(std::uint32_t ticks);

    FiringHistory& history() { return history_; }
    const PlasticityParams& params() const { return params_; }
    CofireCounts& cofire_counts() { return counts_; }

private:
    Network& net_;
    PlasticityParams params_;
    FiringHistory history_;
    CofireCounts counts_;
};

} // namespace sandnet
