#include "sandnet/netcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sandnet {

Network::Network(const Config& cfg) : cfg_(cfg), rng_state_(cfg.net.rng_seed) {
    validate(cfg_.net);
}

NeuronId Network::add_neuron(NeuronKind kind) {
    NeuronId id(static_cast<std::uint32_t>(neurons_.size()));
    neurons_.push_back(Neuron{id, 0.0, false, kind});
    incoming_.emplace_back();
    outgoing_.emplace_back();
    return id;
}

std::uint32_t Network::add_synapse(NeuronId pre, NeuronId post, double ltm,
                                   std::uint32_t delay) {
    if (!has_neuron(pre) || !has_neuron(post))
        throw std::out_of_range("add_synapse: unknown neuron id");
    if (delay < 1)
        throw std::invalid_argument("add_synapse: delay must be >= 1");
    if (ltm < 0.0)
        throw std::invalid_argument("add_synapse: negative weight");
    Synapse s;
    s.pre = pre;
    s.post = post;
    s.weight.ltm = ltm;
    s.delay = delay;
    s.sign = neurons_[pre.v].kind == NeuronKind::inhibitory ? -1 : +1;
    s.buf.assign(delay, 0.0);
    s.head = 0;
    auto idx = static_cast<std::uint32_t>(synapses_.size());
    synapses_.push_back(std::move(s));
    incoming_[post.v].push_back(idx);
    outgoing_[pre.v].push_back(idx);
    return idx;
}

std::int64_t Network::find_synapse(NeuronId pre, NeuronId post) const {
    if (!has_neuron(pre) || !has_neuron(post)) return -1;
    for (std::uint32_t idx : outgoing_[pre.v])
        if (synapses_[idx].post == post) return idx;
    return -1;
}

const Neuron& Network::neuron(NeuronId id) const {
    if (!has_neuron(id)) throw std::out_of_range("unknown neuron id");
    return neurons_[id.v];
}

Neuron& Network::neuron(NeuronId id) {
    if (!has_neuron(id)) throw std::out_of_range("unknown neuron id");
    return neurons_[id.v];
}

std::span<const std::uint32_t> Network::incoming(NeuronId id) const {
    if (!has_neuron(id)) throw std::out_of_range("unknown neuron id");
    return incoming_[id.v];
}

std::span<const std::uint32_t> Network::outgoing(NeuronId id) const {
    if (!has_neuron(id)) throw std::out_of_range("unknown neuron id");
    return outgoing_[id.v];
}

void Network::schedule_injection(NeuronId id, double strength,
                                 std::uint32_t duration) {
    if (!has_neuron(id))
        throw std::out_of_range("schedule_injection: unknown neuron id");
    if (std::isnan(strength) || strength < 0.0)
        throw std::invalid_argument("schedule_injection: strength must be >= 0");
    if (duration < 1)
        throw std::invalid_argument("schedule_injection: duration must be >= 1");
    for (std::uint64_t t = tick_; t < tick_ + duration; ++t)
        schedule_[t][id.v] += strength;
}

void Network::restore(std::vector<Neuron> neurons, std::vector<Synapse> synapses,
                      std::uint64_t tick, std::uint64_t rng_state,
                      std::map<std::uint64_t, std::map<std::uint32_t, double>> schedule) {
    neurons_ = std::move(neurons);
    synapses_ = std::move(synapses);
    schedule_ = std::move(schedule);
    tick_ = tick;
    rng_state_ = rng_state;
    incoming_.assign(neurons_.size(), {});
    outgoing_.assign(neurons_.size(), {});
    for (std::uint32_t i = 0; i < synapses_.size(); ++i) {
        const Synapse& s = synapses_[i];
        if (s.pre.v >= neurons_.size() || s.post.v >= neurons_.size())
            throw std::invalid_argument("restore: synapse endpoint out of range");
        if (s.buf.size() != s.delay)
            throw std::invalid_argument("restore: buffer length mismatch");
        incoming_[s.post.v].push_back(i);
        outgoing_[s.pre.v].push_back(i);
    }
}

double activation(double sigma, const NetParams& p) {
    if (std::isnan(sigma) || sigma < 0.0)
        throw std::domain_error("activation: sigma must be >= 0");
    // -expm1 keeps full precision for small c2*sigma.
    return p.c1 * (-std::expm1(-p.c2 * sigma));
}

double threshold_sigma(const NetParams& p) {
    return -std::log(1.0 - p.f_thr / p.c1) / p.c2;
}

TickReport step_network(Network& net, const ExternalInput& external,
                        const PostActivationHook& hook,
                        std::span<const std::uint32_t> eval_order) {
    const std::size_t n = net.neurons_.size();
    const NetParams& p = net.cfg_.net;

    std::vector<double> ext(n, 0.0);
    for (const auto& [id, strength] : external) {
        if (!net.has_neuron(id))
            throw std::out_of_range("step_network: unknown neuron id " +
                                    std::to_string(id.v));
        if (std::isnan(strength) || strength < 0.0)
            throw std::invalid_argument("step_network: injection must be >= 0");
        ext[id.v] += strength;
    }
    if (auto it = net.schedule_.find(net.tick_); it != net.schedule_.end()) {
        for (const auto& [idx, strength] : it->second) ext[idx] += strength;
        net.schedule_.erase(it);
    }

    TickReport report;
    report.tick = net.tick_;
    report.sigma.assign(n, 0.0);
    report.rate.assign(n, 0.0);

    std::vector<std::uint32_t> natural;
    std::span<const std::uint32_t> order = eval_order;
    if (order.empty()) {
        natural.resize(n);
        std::iota(natural.begin(), natural.end(), 0u);
        order = natural;
    } else {
        if (order.size() != n)
            throw std::invalid_argument("step_network: eval_order size mismatch");
        std::vector<bool> seen(n, false);
        for (std::uint32_t j : order) {
            if (j >= n || seen[j])
                throw std::invalid_argument("step_network: eval_order is not a permutation");
            seen[j] = true;
        }
    }

    // All delayed rates are read before any buffer is written, so the update
    // is synchronous for every evaluation order.
    for (std::uint32_t j : order) {
        double sigma = ext[j];
        for (std::uint32_t idx : net.incoming_[j]) {
            const Synapse& s = net.synapses_[idx];
            sigma += s.sign * s.weight.effective(p.w_max) * s.delayed_rate();
        }
        if (sigma < 0.0) sigma = 0.0;
        report.sigma[j] = sigma;
        report.rate[j] = activation(sigma, p);
    }

    for (std::uint32_t j = 0; j < n; ++j) net.neurons_[j].rate = report.rate[j];
    if (hook) {
        hook(net, report);
        for (std::uint32_t j = 0; j < n; ++j) report.rate[j] = net.neurons_[j].rate;
    }

    for (std::uint32_t j = 0; j < n; ++j) {
        Neuron& nrn = net.neurons_[j];
        nrn.fired = nrn.rate >= p.f_thr;
        if (nrn.fired) report.fired.push_back(nrn.id);
    }
    for (Synapse& s : net.synapses_) s.push_rate(net.neurons_[s.pre.v].rate);
    ++net.tick_;
    return report;
}

void inject_pattern(Network& net, const std::vector<NeuronId>& pattern,
                    double strength, std::uint32_t duration) {
    if (std::isnan(strength) || strength < 0.0)
        throw std::invalid_argument("inject_pattern: strength must be >= 0");
    if (duration < 1)
        throw std::invalid_argument("inject_pattern: duration must be >= 1");
    for (NeuronId id : pattern) net.schedule_injection(id, strength, duration);
}

void quiet_network(Network& net) {
    for (std::uint32_t i = 0; i < net.neuron_count(); ++i) {
        Neuron& n = net.neuron(NeuronId(i));
        n.rate = 0.0;
        n.fired = false;
    }
    for (std::uint32_t i = 0; i < net.synapse_count(); ++i) {
        Synapse& s = net.synapse(i);
        std::fill(s.buf.begin(), s.buf.end(), 0.0);
        s.head = 0;
    }
}

StateSnapshot read_state(const Network& net) {
    StateSnapshot snap;
    snap.tick = net.tick();
    snap.rates.reserve(net.neuron_count());
    snap.fired.reserve(net.neuron_count());
    for (std::uint32_t i = 0; i < net.neuron_count(); ++i) {
        const Neuron& nrn = net.neuron(NeuronId(i));
        snap.rates.push_back(nrn.rate);
        snap.fired.push_back(nrn.fired);
    }
    snap.weights.reserve(net.synapse_count());
    for (std::uint32_t i = 0; i < net.synapse_count(); ++i)
        snap.weights.push_back(net.synapse(i).weight);
    return snap;
}

} // namespace sandnet
