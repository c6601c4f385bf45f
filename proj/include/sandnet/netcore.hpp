#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "sandnet/params.hpp"

namespace sandnet {

// Dense neuron identifier, stable across snapshot save/load.
struct NeuronId {
    std::uint32_t v = 0;

    constexpr NeuronId() = default;
    constexpr explicit NeuronId(std::uint32_t value) : v(value) {}

    friend constexpr bool operator==(NeuronId a, NeuronId b) { return a.v == b.v; }
    friend constexpr bool operator!=(NeuronId a, NeuronId b) { return a.v != b.v; }
    friend constexpr bool operator<(NeuronId a, NeuronId b) { return a.v < b.v; }
};

enum class NeuronKind : std::uint8_t { excitatory = 0, inhibitory = 1 };

struct Neuron {
    NeuronId id;
    double rate = 0.0;        // firing frequency, in [0, c1]
    bool fired = false;       // rate >= f_thr this tick
    NeuronKind kind = NeuronKind::excitatory;
};

// One effective weight split into a persistent long-term part and a decaying
// short-term trace. Plasticity writes stm; consolidation moves stm into ltm.
struct DualTraceWeight {
    double ltm = 0.0;
    double stm = 0.0;

    double effective(double w_max) const {
        double w = ltm + stm;
        return w < w_max ? w : w_max;
    }
};

struct Synapse {
    NeuronId pre;
    NeuronId post;
    DualTraceWeight weight;
    std::uint32_t delay = 1;  // ticks, >= 1
    int sign = +1;            // +1 excitatory pre, -1 inhibitory pre

    // Ring buffer of the pre neuron's past rates; buf[head] is the rate
    // from `delay` steps ago, i.e. the value that arrives this tick.
    std::vector<double> buf;
    std::uint32_t head = 0;

    double delayed_rate() const { return buf[head]; }
    void push_rate(double r) {
        buf[head] = r;
        head = (head + 1) % static_cast<std::uint32_t>(buf.size());
    }
};

// Result of one step. `tick` is the index of the step itself: the report of
// the first step on a fresh network carries tick 0, and the new rates are
// "the rates at tick 0". sigma[i] is the floored summed input of neuron i.
struct TickReport {
    std::uint64_t tick = 0;
    std::vector<double> sigma;
    std::vector<double> rate;
    std::vector<NeuronId> fired;
};

struct StateSnapshot {
    std::uint64_t tick = 0;
    std::vector<double> rates;
    std::vector<bool> fired;
    std::vector<DualTraceWeight> weights; // per synapse, creation order
};

using ExternalInput = std::map<NeuronId, double>;

// Called after the new rates are computed but before they are committed to
// the delay buffers; may rewrite rates (winner-take-all does). Fired flags
// are derived from the final rates.
using PostActivationHook = std::function<void(class Network&, TickReport&)>;

// Directed graph of rate neurons and weighted delayed synapses plus the
// pending stimulus schedule. Stepping is synchronous and deterministic:
// all new rates are computed from the pre-tick state, and per-neuron input
// sums run in synapse creation order regardless of evaluation order.
class Network {
public:
    Network() = default;
    explicit Network(const Config& cfg);

    NeuronId add_neuron(NeuronKind kind = NeuronKind::excitatory);
    // Returns the synapse index. `ltm` is the initial long-term weight.
    std::uint32_t add_synapse(NeuronId pre, NeuronId post, double ltm,
                              std::uint32_t delay = 1);
    // Index of the pre->post synapse, or -1 when absent (first match).
    std::int64_t find_synapse(NeuronId pre, NeuronId post) const;

    std::size_t neuron_count() const { return neurons_.size(); }
    std::size_t synapse_count() const { return synapses_.size(); }
    bool has_neuron(NeuronId id) const { return id.v < neurons_.size(); }

    const Neuron& neuron(NeuronId id) const;
    Neuron& neuron(NeuronId id);
    const Synapse& synapse(std::uint32_t idx) const { return synapses_.at(idx); }
    Synapse& synapse(std::uint32_t idx) { return synapses_.at(idx); }
    std::span<const std::uint32_t> incoming(NeuronId id) const;
    std::span<const std::uint32_t> outgoing(NeuronId id) const;

    const Config& config() const { return cfg_; }
    Config& config() { return cfg_; }
    const NetParams& params() const { return cfg_.net; }

    std::uint64_t tick() const { return tick_; }
    std::uint64_t rng_state() const { return rng_state_; }

    // Schedules a constant external injection for `duration` ticks starting
    // at the current tick. Overlapping schedules on one neuron sum.
    void schedule_injection(NeuronId id, double strength, std::uint32_t duration);
    const std::map<std::uint64_t, std::map<std::uint32_t, double>>& schedule() const {
        return schedule_;
    }

    friend TickReport step_network(Network& net, const ExternalInput& external,
                                   const PostActivationHook& hook,
                                   std::span<const std::uint32_t> eval_order);

    // Snapshot plumbing: rebuild adjacency and restore counters after load.
    void restore(std::vector<Neuron> neurons, std::vector<Synapse> synapses,
                 std::uint64_t tick, std::uint64_t rng_state,
                 std::map<std::uint64_t, std::map<std::uint32_t, double>> schedule);

private:
    std::vector<Neuron> neurons_;
    std::vector<Synapse> synapses_;
    std::vector<std::vector<std::uint32_t>> incoming_;
    std::vector<std::vector<std::uint32_t>> outgoing_;
    std::map<std::uint64_t, std::map<std::uint32_t, double>> schedule_;
    Config cfg_;
    std::uint64_t tick_ = 0;
    std::uint64_t rng_state_ = 0;
};

// The rule R3 response: c1 * (1 - exp(-c2 * sigma)). Strictly increasing,
// bounded above by c1. Negative sigma is a domain error; the stepping loop
// floors inhibition-dominated sums at zero before calling this.
double activation(double sigma, const NetParams& p);

// Inverse threshold: the sigma at which activation(sigma) == f_thr.
double threshold_sigma(const NetParams& p);

// Advances the network one tick. sigma_j = max(0, sum over incoming
// synapses of sign * effective_weight * delayed_pre_rate + external_j +
// scheduled_j). Unknown ids, NaN or negative injections are errors.
// `eval_order`, when given, permutes the per-neuron evaluation sequence;
// results are identical for any permutation.
TickReport step_network(Network& net, const ExternalInput& external = {},
                        const PostActivationHook& hook = nullptr,
                        std::span<const std::uint32_t> eval_order = {});

// Schedules a constant injection over every neuron of `pattern`.
void inject_pattern(Network& net, const std::vector<NeuronId>& pattern,
                    double strength, std::uint32_t duration);

StateSnapshot read_state(const Network& net);

// Silences all ongoing activity: rates, fired flags, and in-flight delay
// buffers drop to zero. Weights, schedule, and the tick counter stay. Used
// as the inter-trial rest, since strongly coupled circuits reverberate and
// never settle on their own.
void quiet_network(Network& net);

} // namespace sandnet
