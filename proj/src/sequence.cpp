#include "sandnet/sequence.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sandnet {

namespace {

std::uint32_t ensure_synapse(Network& net, NeuronId pre, NeuronId post,
                             std::uint32_t delay) {
    std::int64_t idx = net.find_synapse(pre, post);
    if (idx >= 0) return static_cast<std::uint32_t>(idx);
    return net.add_synapse(pre, post, 0.0, delay);
}

std::uint32_t max_delay(const Network& net) {
    std::uint32_t d = 1;
    for (std::uint32_t i = 0; i < net.synapse_count(); ++i)
        d = std::max(d, net.synapse(i).delay);
    return d;
}

// One presentation pass: item k injected for one tick at onset k*gap, then a
// quiet tail long enough that no firing pairs across repetitions.
void present_once(PlasticityEngine& engine, Network& net,
                  const std::vector<NeuronId>& items, std::uint32_t gap,
                  double strength, std::uint32_t rest) {
    std::uint64_t start = net.tick();
    for (std::size_t k = 0; k < items.size(); ++k) {
        std::uint64_t onset = start + k * gap;
        while (net.tick() < onset) engine.tick();
        engine.tick(ExternalInput{{items[k], strength}});
    }
    for (std::uint32_t i = 0; i < rest; ++i) engine.tick();
}

} // namespace

TrainingReport train_sequence(Network& net, const SequenceSpec& spec) {
    if (spec.items.empty())
        throw std::invalid_argument("train_sequence: empty item list");
    if (spec.gap < 1 || spec.repetitions < 1)
        throw std::invalid_argument("train_sequence: gap and repetitions must be >= 1");
    for (NeuronId id : spec.items)
        if (!net.has_neuron(id))
            throw std::out_of_range("train_sequence: unknown neuron id");

    TrainingReport report;
    for (std::size_t k = 0; k + 1 < spec.items.size(); ++k) {
        ensure_synapse(net, spec.items[k], spec.items[k + 1], spec.gap);
        ensure_synapse(net, spec.items[k + 1], spec.items[k], spec.gap);
        report.pairs.push_back({spec.items[k], spec.items[k + 1], {}, {}});
    }

    const PlasticityParams& pp = net.config().plasticity;
    const std::uint32_t rest =
        std::max(net.config().sequence.rest, pp.window_w + 1);

    PlasticityEngine engine(net, pp);
    for (std::uint32_t rep = 0; rep < spec.repetitions; ++rep) {
        present_once(engine, net, spec.items, spec.gap, spec.strength, rest);
        consolidate(net, pp.consolidate_rate);
        for (PairTrajectory& pt : report.pairs) {
            const double w_max = net.params().w_max;
            auto fwd = net.find_synapse(pt.from, pt.to);
            auto bwd = net.find_synapse(pt.to, pt.from);
            pt.forward.push_back(net.synapse(static_cast<std::uint32_t>(fwd))
                                     .weight.effective(w_max));
            pt.backward.push_back(net.synapse(static_cast<std::uint32_t>(bwd))
                                      .weight.effective(w_max));
        }
    }
    return report;
}

std::vector<NeuronId> recall_sequence(Network& net, NeuronId cue,
                                      std::uint32_t max_len) {
    if (!net.has_neuron(cue))
        throw std::out_of_range("recall_sequence: unknown cue");
    const std::uint64_t horizon =
        static_cast<std::uint64_t>(max_len) * max_delay(net) + 2;

    std::map<std::uint32_t, std::uint64_t> first_fire;
    for (std::uint64_t t = 0; t < horizon; ++t) {
        TickReport r = t == 0
            ? step_network(net, {{cue, net.config().sequence.recall_strength}})
            : step_network(net);
        for (NeuronId id : r.fired)
            first_fire.emplace(id.v, r.tick);
    }

    std::vector<std::pair<std::uint64_t, std::uint32_t>> order;
    for (auto [id, t] : first_fire) order.emplace_back(t, id);
    std::sort(order.begin(), order.end());
    std::vector<NeuronId> result;
    for (auto [t, id] : order) result.push_back(NeuronId(id));
    return result;
}

ObjectCircuit encode_object(Network& net, const std::vector<NeuronId>& views,
                            const std::vector<NeuronId>& presentation_order) {
    if (views.size() < 2)
        throw std::invalid_argument("encode_object: need at least 2 views");
    if (presentation_order.empty())
        throw std::invalid_argument("encode_object: empty presentation order");
    for (NeuronId v : presentation_order)
        if (std::find(views.begin(), views.end(), v) == views.end())
            throw std::invalid_argument("encode_object: presented view not in set");

    // Close the loop so any view can retrieve the whole circuit.
    std::vector<NeuronId> stream = presentation_order;
    if (!stream.empty() && stream.back() != stream.front())
        stream.push_back(stream.front());

    const SequenceParams& sp = net.config().sequence;
    ObjectCircuit circuit;
    circuit.views = views;
    for (std::size_t k = 0; k + 1 < stream.size(); ++k) {
        if (stream[k] == stream[k + 1]) continue;
        circuit.ring.push_back(
            ensure_synapse(net, stream[k], stream[k + 1], sp.object_gap));
        ensure_synapse(net, stream[k + 1], stream[k], sp.object_gap);
    }

    const PlasticityParams& pp = net.config().plasticity;
    const std::uint32_t rest = std::max(sp.rest, pp.window_w + 1);
    PlasticityEngine engine(net, pp);
    for (std::uint32_t rep = 0; rep < sp.object_reps; ++rep) {
        present_once(engine, net, stream, sp.object_gap, sp.object_strength, rest);
        consolidate(net, pp.consolidate_rate);
        // The closed ring reverberates once its weights saturate; rest it
        // between trials so the next presentation (and later retrievals)
        // start from silence.
        quiet_network(net);
    }

    // The most frequent view anchors the circuit; ties go to the earliest
    // presented ("classic impression").
    std::map<std::uint32_t, std::uint32_t> freq;
    for (NeuronId v : presentation_order) ++freq[v.v];
    NeuronId anchor = presentation_order.front();
    std::uint32_t best = 0;
    for (NeuronId v : presentation_order) {
        if (freq[v.v] > best) {
            best = freq[v.v];
            anchor = v;
        }
    }
    circuit.anchor = anchor;
    return circuit;
}

RecognitionResult recognize(Network& net, const std::vector<NeuronId>& clues,
                            const std::vector<NeuronId>& target_pool) {
    if (clues.empty() || target_pool.empty())
        throw std::invalid_argument("recognize: empty clue or target pool");
    for (NeuronId id : clues)
        if (!net.has_neuron(id)) throw std::out_of_range("recognize: unknown clue");

    const SequenceParams& sp = net.config().sequence;
    ExternalInput ext;
    for (NeuronId c : clues) ext[c] += sp.recognize_strength;

    // Let the clue wave reach the pool through whatever delays exist, then
    // score each candidate by its peak input sum.
    std::uint32_t settle = max_delay(net) + 1;
    std::vector<double> peak(net.neuron_count(), 0.0);
    for (std::uint32_t t = 0; t <= settle; ++t) {
        TickReport r = t == 0 ? step_network(net, ext) : step_network(net);
        for (NeuronId m : target_pool)
            peak[m.v] = std::max(peak[m.v], r.sigma[m.v]);
    }

    std::vector<NeuronId> pool = target_pool;
    std::sort(pool.begin(), pool.end());
    NeuronId winner = pool.front();
    double best = -1.0;
    for (NeuronId m : pool) {
        if (peak[m.v] > best) {
            best = peak[m.v];
            winner = m;
        }
    }
    RetrievalMode mode = clues.size() < sp.assoc_cutoff
                             ? RetrievalMode::association
                             : RetrievalMode::recognition;
    return {winner, mode};
}

} // namespace sandnet
