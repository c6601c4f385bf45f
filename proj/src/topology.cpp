#include "sandnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace sandnet {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<std::uint32_t> seeded_permutation(std::uint32_t n, std::uint64_t& state) {
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::uint32_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[splitmix64(state) % i]);
    return perm;
}

void validate_spec(const SandglassSpec& spec) {
    const auto& sizes = spec.layer_sizes;
    if (sizes.size() < 3)
        throw std::invalid_argument("sandglass: need at least 3 layers");
    for (std::uint32_t s : sizes)
        if (s == 0) throw std::invalid_argument("sandglass: empty layer");
    auto waist = std::min_element(sizes.begin(), sizes.end());
    if (std::count(sizes.begin(), sizes.end(), *waist) != 1)
        throw std::invalid_argument("sandglass: no unique waist");
    std::size_t w = static_cast<std::size_t>(waist - sizes.begin());
    if (w == 0 || w + 1 == sizes.size())
        throw std::invalid_argument("sandglass: waist must be interior");
    for (std::size_t i = 0; i < w; ++i)
        if (sizes[i] < sizes[i + 1])
            throw std::invalid_argument("sandglass: not convergent before waist");
    for (std::size_t i = w; i + 1 < sizes.size(); ++i)
        if (sizes[i] > sizes[i + 1])
            throw std::invalid_argument("sandglass: not divergent after waist");
    if (spec.fan_in < 1) throw std::invalid_argument("sandglass: fan_in must be >= 1");
    if (spec.weight < 0.0) throw std::invalid_argument("sandglass: negative weight");
}

} // namespace

std::vector<std::vector<NeuronId>> sandglass_layers(const SandglassSpec& spec) {
    std::vector<std::vector<NeuronId>> layers;
    std::uint32_t next = 0;
    for (std::uint32_t size : spec.layer_sizes) {
        std::vector<NeuronId> layer;
        for (std::uint32_t i = 0; i < size; ++i) layer.push_back(NeuronId(next++));
        layers.push_back(std::move(layer));
    }
    return layers;
}

Network build_sandglass(const SandglassSpec& spec, const Config& cfg) {
    validate_spec(spec);
    Network net(cfg);
    auto layers = sandglass_layers(spec);
    for (std::uint32_t size : spec.layer_sizes)
        for (std::uint32_t i = 0; i < size; ++i) net.add_neuron();

    std::uint64_t state = spec.seed;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        const auto& a = layers[l];
        const auto& b = layers[l + 1];
        const bool a_wider = a.size() >= b.size();
        const auto& wide = a_wider ? a : b;
        const auto& narrow = a_wider ? b : a;
        const std::uint32_t fan =
            std::min<std::uint32_t>(spec.fan_in,
                                    static_cast<std::uint32_t>(narrow.size()));
        // Each wide-side neuron takes `fan` links into a rolling window of a
        // seeded permutation of the narrow side, so narrow neurons are
        // covered evenly and no pair repeats.
        auto perm = seeded_permutation(static_cast<std::uint32_t>(narrow.size()),
                                       state);
        for (std::uint32_t i = 0; i < wide.size(); ++i) {
            for (std::uint32_t j = 0; j < fan; ++j) {
                NeuronId partner =
                    narrow[perm[(static_cast<std::uint64_t>(i) * fan + j) %
                                narrow.size()]];
                if (a_wider)
                    net.add_synapse(wide[i], partner, spec.weight, spec.delay);
                else
                    net.add_synapse(partner, wide[i], spec.weight, spec.delay);
            }
        }
    }
    return net;
}

std::optional<std::uint32_t> logic_distance(const Network& net, NeuronId from,
                                            NeuronId to) {
    if (!net.has_neuron(from) || !net.has_neuron(to))
        throw std::out_of_range("logic_distance: unknown neuron id");
    if (from == to) return 0u;
    std::vector<std::uint32_t> dist(net.neuron_count(), UINT32_MAX);
    std::deque<NeuronId> queue{from};
    dist[from.v] = 0;
    while (!queue.empty()) {
        NeuronId u = queue.front();
        queue.pop_front();
        for (std::uint32_t idx : net.outgoing(u)) {
            NeuronId v = net.synapse(idx).post;
            if (dist[v.v] != UINT32_MAX) continue;
            dist[v.v] = dist[u.v] + 1;
            if (v == to) return dist[v.v];
            queue.push_back(v);
        }
    }
    return std::nullopt;
}

std::vector<double> influence_score(const Network& net, NeuronId source,
                                    double probe_strength, std::uint32_t horizon) {
    if (!net.has_neuron(source))
        throw std::out_of_range("influence_score: unknown neuron id");
    if (probe_strength < 0.0)
        throw std::invalid_argument("influence_score: negative probe strength");

    Network probed = net;
    Network baseline = net;
    std::vector<double> delta(net.neuron_count(), 0.0);
    for (std::uint32_t t = 0; t < horizon; ++t) {
        TickReport rp = probe_strength > 0.0
                            ? step_network(probed, {{source, probe_strength}})
                            : step_network(probed);
        TickReport rb = step_network(baseline);
        for (std::size_t i = 0; i < delta.size(); ++i)
            delta[i] = std::max(delta[i], std::abs(rp.rate[i] - rb.rate[i]));
    }
    return delta;
}

namespace {

std::vector<std::optional<std::uint32_t>> distances_from_set(
    const Network& net, const std::vector<NeuronId>& sources) {
    std::vector<std::uint32_t> dist(net.neuron_count(), UINT32_MAX);
    std::deque<NeuronId> queue;
    for (NeuronId s : sources) {
        if (!net.has_neuron(s))
            throw std::out_of_range("unknown neuron id in source set");
        if (dist[s.v] == UINT32_MAX) {
            dist[s.v] = 0;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        NeuronId u = queue.front();
        queue.pop_front();
        for (std::uint32_t idx : net.outgoing(u)) {
            NeuronId v = net.synapse(idx).post;
            if (dist[v.v] != UINT32_MAX) continue;
            dist[v.v] = dist[u.v] + 1;
            queue.push_back(v);
        }
    }
    std::vector<std::optional<std::uint32_t>> out(net.neuron_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        if (dist[i] != UINT32_MAX) out[i] = dist[i];
    return out;
}

std::vector<std::uint32_t> reach_counts(const Network& net,
                                        const std::vector<NeuronId>& outputs) {
    // Reverse BFS from each output; counts per neuron how many it reaches.
    std::vector<std::uint32_t> reach(net.neuron_count(), 0);
    for (NeuronId o : outputs) {
        if (!net.has_neuron(o))
            throw std::out_of_range("unknown neuron id in output set");
        std::vector<bool> seen(net.neuron_count(), false);
        std::deque<NeuronId> queue{o};
        seen[o.v] = true;
        while (!queue.empty()) {
            NeuronId u = queue.front();
            queue.pop_front();
            for (std::uint32_t idx : net.incoming(u)) {
                NeuronId v = net.synapse(idx).pre;
                if (seen[v.v]) continue;
                seen[v.v] = true;
                queue.push_back(v);
            }
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i]) ++reach[i];
    }
    return reach;
}

} // namespace

std::vector<std::pair<NeuronId, double>> find_kernel(
    const Network& net, const std::vector<NeuronId>& inputs,
    const std::vector<NeuronId>& outputs) {
    if (inputs.empty() || outputs.empty())
        throw std::invalid_argument("find_kernel: empty input or output set");

    const auto dist = distances_from_set(net, inputs);
    const auto reach = reach_counts(net, outputs);

    std::uint32_t max_dist = 0;
    for (const auto& d : dist)
        if (d) max_dist = std::max(max_dist, *d);

    std::vector<std::pair<NeuronId, double>> ranking;
    for (std::uint32_t i = 0; i < net.neuron_count(); ++i) {
        double score = 0.0;
        if (dist[i] && max_dist > 0) {
            double d_norm = static_cast<double>(*dist[i]) / max_dist;
            double r_norm = static_cast<double>(reach[i]) / outputs.size();
            score = d_norm * r_norm;
        }
        ranking.emplace_back(NeuronId(i), score);
    }
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranking;
}

std::vector<PositionReport> measure_positions(const Network& net,
                                              const std::vector<NeuronId>& inputs,
                                              const std::vector<NeuronId>& outputs,
                                              double probe_strength,
                                              std::uint32_t horizon) {
    if (inputs.empty() || outputs.empty())
        throw std::invalid_argument("measure_positions: empty input or output set");

    const auto dist = distances_from_set(net, inputs);
    const auto reach = reach_counts(net, outputs);

    std::vector<double> influence(net.neuron_count(), 0.0);
    for (NeuronId in : inputs) {
        auto delta = influence_score(net, in, probe_strength, horizon);
        for (std::size_t i = 0; i < delta.size(); ++i)
            influence[i] = std::max(influence[i], delta[i]);
    }
    double max_influence = 0.0;
    for (double d : influence) max_influence = std::max(max_influence, d);

    std::vector<PositionReport> reports;
    for (std::uint32_t i = 0; i < net.neuron_count(); ++i) {
        PositionReport r;
        r.neuron = NeuronId(i);
        r.distance_from_inputs = dist[i];
        r.reach = reach[i];
        r.influence = influence[i];
        r.autonomy = max_influence > 0.0 ? 1.0 - influence[i] / max_influence : 1.0;
        reports.push_back(r);
    }
    return reports;
}

} // namespace sandnet
