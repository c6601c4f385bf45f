#include "sandnet/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sandnet {

const std::deque<std::uint64_t> FiringHistory::empty_;

void FiringHistory::record(const TickReport& report) {
    for (NeuronId id : report.fired) {
        if (id.v >= per_neuron_.size()) per_neuron_.resize(id.v + 1);
        per_neuron_[id.v].push_back(report.tick);
    }
    last_tick_ = report.tick;
    // Drop events that can no longer pair with anything.
    if (last_tick_ >= window_) {
        std::uint64_t horizon = last_tick_ - window_;
        for (auto& dq : per_neuron_)
            while (!dq.empty() && dq.front() < horizon) dq.pop_front();
    }
}

const std::deque<std::uint64_t>& FiringHistory::fired_ticks(NeuronId id) const {
    if (id.v >= per_neuron_.size()) return empty_;
    return per_neuron_[id.v];
}

double stdp_kernel(std::int64_t dt, const PlasticityParams& p) {
    if (dt == 0) return 0.0;
    std::int64_t mag = dt > 0 ? dt : -dt;
    if (mag > static_cast<std::int64_t>(p.window_w)) return 0.0;
    if (dt > 0) return p.a_plus * std::exp(-static_cast<double>(dt) / p.tau_plus);
    return -p.a_minus * std::exp(-static_cast<double>(mag) / p.tau_minus);
}

namespace {

void bump_stm(Network& net, std::uint32_t syn_idx, double delta,
              std::vector<WeightDelta>& out) {
    Synapse& s = net.synapse(syn_idx);
    double before = s.weight.stm;
    double after = std::clamp(before + delta, 0.0, net.params().s_max);
    if (after != before) {
        s.weight.stm = after;
        out.push_back({syn_idx, after - before});
    }
}

} // namespace

std::vector<WeightDelta> apply_temporal_plasticity(Network& net,
                                                   const FiringHistory& history) {
    return apply_temporal_plasticity(net, history, net.config().plasticity);
}

std::vector<WeightDelta> apply_temporal_plasticity(Network& net,
                                                   const FiringHistory& history,
                                                   const PlasticityParams& p) {
    std::vector<WeightDelta> deltas;
    const std::uint64_t now = history.last_tick();

    // Each (pre-event, post-event) pair is handled exactly once, when its
    // later event occurs.
    for (std::uint32_t j = 0; j < net.neuron_count(); ++j) {
        NeuronId id(j);
        const auto& own = history.fired_ticks(id);
        if (own.empty() || own.back() != now) continue;

        for (std::uint32_t idx : net.incoming(id)) {   // id as post: pre fired first
            const Synapse& s = net.synapse(idx);
            for (std::uint64_t t_pre : history.fired_ticks(s.pre)) {
                if (t_pre >= now) continue;
                bump_stm(net, idx, stdp_kernel(static_cast<std::int64_t>(now - t_pre), p),
                         deltas);
            }
        }
        for (std::uint32_t idx : net.outgoing(id)) {   // id as pre: post fired first
            const Synapse& s = net.synapse(idx);
            for (std::uint64_t t_post : history.fired_ticks(s.post)) {
                if (t_post >= now) continue;
                bump_stm(net, idx,
                         stdp_kernel(-static_cast<std::int64_t>(now - t_post), p),
                         deltas);
            }
        }
    }
    return deltas;
}

std::vector<WeightDelta> apply_cofire(Network& net,
                                      const std::vector<NeuronId>& fired,
                                      const PlasticityParams& p,
                                      CofireCounts* counts) {
    std::vector<WeightDelta> deltas;
    for (std::size_t i = 0; i < fired.size(); ++i) {
        for (std::size_t k = i + 1; k < fired.size(); ++k) {
            NeuronId u = fired[i], v = fired[k];
            bool shared = false;
            for (std::uint32_t ui : net.outgoing(u)) {
                NeuronId target = net.synapse(ui).post;
                std::int64_t vi = net.find_synapse(v, target);
                if (vi < 0) continue;
                shared = true;
                bump_stm(net, ui, p.eta_cofire, deltas);
                bump_stm(net, static_cast<std::uint32_t>(vi), p.eta_cofire, deltas);
            }
            if (!shared && p.grow_new && counts) {
                auto key = std::minmax(u.v, v.v);
                std::uint32_t& c = (*counts)[{key.first, key.second}];
                if (++c >= p.grow_threshold) {
                    NeuronId fresh = net.add_neuron(NeuronKind::excitatory);
                    net.add_synapse(u, fresh, p.grow_init_weight, 1);
                    net.add_synapse(v, fresh, p.grow_init_weight, 1);
                    c = 0;
                }
            }
        }
    }
    return deltas;
}

void decay_stm(Network& net, const PlasticityParams& p) {
    const double factor = std::exp(-1.0 / p.tau_stm);
    for (std::uint32_t i = 0; i < net.synapse_count(); ++i)
        net.synapse(i).weight.stm *= factor;
}

void consolidate(Network& net, double rate) {
    if (!(rate > 0.0) || rate > 1.0)
        throw std::invalid_argument("consolidate: rate must be in (0, 1]");
    const double w_max = net.params().w_max;
    for (std::uint32_t i = 0; i < net.synapse_count(); ++i) {
        DualTraceWeight& w = net.synapse(i).weight;
        double moved = rate * w.stm;
        w.ltm = std::min(w.ltm + moved, w_max);
        w.stm -= moved;
    }
}

PlasticityEngine::PlasticityEngine(Network& net, PlasticityParams params)
    : net_(net), params_(std::move(params)), history_(params_.window_w) {
    validate(params_);
    net_.config().plasticity = params_;
}

TickReport PlasticityEngine::tick(const ExternalInput& external,
                                  const PostActivationHook& hook) {
    TickReport report = step_network(net_, external, hook);
    history_.record(report);
    apply_temporal_plasticity(net_, history_);
    apply_cofire(net_, report.fired, params_, &counts_);
    decay_stm(net_, params_);
    return report;
}

void PlasticityEngine::run(std::uint32_t ticks) {
    for (std::uint32_t i = 0; i < ticks; ++i) tick();
}

} // namespace sandnet
