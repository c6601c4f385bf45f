#include "sandnet/competition.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace sandnet {

namespace {

// Input sources that actually carry signal; synapses whose weight never
// rose above the grouping floor (untrained backward links, LTD residue) do
// not make two neurons rivals.
std::vector<std::set<std::uint32_t>> input_sources(const Network& net) {
    const double floor = net.config().competition.group_min_weight;
    const double w_max = net.params().w_max;
    std::vector<std::set<std::uint32_t>> in(net.neuron_count());
    for (std::uint32_t j = 0; j < net.neuron_count(); ++j)
        for (std::uint32_t idx : net.incoming(NeuronId(j))) {
            const Synapse& s = net.synapse(idx);
            if (s.weight.effective(w_max) >= floor) in[j].insert(s.pre.v);
        }
    return in;
}

std::uint32_t overlap(const std::set<std::uint32_t>& a,
                      const std::set<std::uint32_t>& b) {
    std::uint32_t n = 0;
    for (std::uint32_t x : a)
        if (b.count(x)) ++n;
    return n;
}

} // namespace

std::vector<InhibitionGroup> build_groups(const Network& net,
                                          std::uint32_t overlap_threshold) {
    if (overlap_threshold < 1)
        throw std::invalid_argument("build_groups: overlap_threshold must be >= 1");

    const auto in = input_sources(net);
    const std::uint32_t n = static_cast<std::uint32_t>(net.neuron_count());

    struct Pair { std::uint32_t ov, u, v; };
    std::vector<Pair> pairs;
    for (std::uint32_t u = 0; u < n; ++u) {
        if (in[u].empty()) continue;
        for (std::uint32_t v = u + 1; v < n; ++v) {
            std::uint32_t ov = overlap(in[u], in[v]);
            if (ov >= overlap_threshold) pairs.push_back({ov, u, v});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.ov != b.ov) return a.ov > b.ov;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });

    std::vector<bool> assigned(n, false);
    std::vector<InhibitionGroup> groups;
    for (const Pair& seed : pairs) {
        if (assigned[seed.u] || assigned[seed.v]) continue;
        std::vector<std::uint32_t> members{seed.u, seed.v};
        for (std::uint32_t w = 0; w < n; ++w) {
            if (assigned[w] || w == seed.u || w == seed.v) continue;
            bool clique = true;
            for (std::uint32_t m : members)
                if (overlap(in[w], in[m]) < overlap_threshold) { clique = false; break; }
            if (clique) members.push_back(w);
        }
        std::sort(members.begin(), members.end());
        InhibitionGroup g;
        g.overlap_threshold = overlap_threshold;
        g.inhibition_strength = net.config().competition.inhibition_strength;
        for (std::uint32_t m : members) {
            assigned[m] = true;
            g.members.push_back(NeuronId(m));
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

NeuronId wta_winner(const Network& net, const InhibitionGroup& group,
                    const std::vector<double>& sigma, TieBreak) {
    if (group.members.empty())
        throw std::invalid_argument("wta_winner: empty group");
    const bool by_fanin = net.config().competition.fanin_mode;
    bool first = true;
    NeuronId best = group.members.front();
    double best_score = 0.0;
    for (NeuronId m : group.members) {
        if (m.v >= sigma.size())
            throw std::out_of_range("wta_winner: member without a sigma entry");
        double score = by_fanin ? static_cast<double>(net.incoming(m).size())
                                : sigma[m.v];
        if (first || score > best_score ||
            (score == best_score && m.v < best.v)) { // ties: lowest id
            best_score = score;
            best = m;
            first = false;
        }
    }
    return best;
}

NeuronId resolve_wta(Network& net, const InhibitionGroup& group,
                     const std::vector<double>& sigma, TieBreak tie) {
    NeuronId winner = wta_winner(net, group, sigma, tie);
    for (NeuronId m : group.members)
        if (m != winner) net.neuron(m).rate = 0.0;
    return winner;
}

PostActivationHook wta_hook(const std::vector<InhibitionGroup>& groups) {
    return [&groups](Network& net, TickReport& report) {
        const CompetitionParams& cp = net.config().competition;
        if (cp.hard_wta) {
            for (const InhibitionGroup& g : groups)
                resolve_wta(net, g, report.sigma);
            return;
        }
        // Soft mode: subtract a fixed penalty per rival, then re-activate.
        for (const InhibitionGroup& g : groups) {
            double penalty = g.inhibition_strength *
                             static_cast<double>(g.members.size() - 1);
            for (NeuronId m : g.members) {
                double s = report.sigma[m.v] - penalty;
                net.neuron(m).rate = activation(s < 0.0 ? 0.0 : s, net.params());
            }
        }
    };
}

} // namespace sandnet
