#pragma once

#include <cstdint>
#include <vector>

#include "sandnet/netcore.hpp"

namespace sandnet {

// Neurons sharing at least overlap_threshold input sources compete by
// winner-take-all.
struct InhibitionGroup {
    std::vector<NeuronId> members;          // ascending, size >= 2
    std::uint32_t overlap_threshold = 1;
    double inhibition_strength = 5.0;       // used by the soft mode only
};

enum class TieBreak { lowest_id };

// Greedy maximal-clique cover of the "shares >= threshold input sources"
// relation, seeded from the highest-overlap pair; each neuron lands in at
// most one group. Deterministic for a given network.
std::vector<InhibitionGroup> build_groups(const Network& net,
                                          std::uint32_t overlap_threshold);

// Winner under the given sigma map: highest sigma, ties to the lowest id
// (or highest anatomical fan-in when the config selects fanin_mode).
NeuronId wta_winner(const Network& net, const InhibitionGroup& group,
                    const std::vector<double>& sigma,
                    TieBreak tie = TieBreak::lowest_id);

// Resolves one group against the current report: losers' rates drop to 0,
// the winner keeps activation(sigma_winner). Empty groups are an error.
NeuronId resolve_wta(Network& net, const InhibitionGroup& group,
                     const std::vector<double>& sigma,
                     TieBreak tie = TieBreak::lowest_id);

// Post-activation hook resolving every group each tick. Honors the
// hard/soft switch in the network's competition config.
PostActivationHook wta_hook(const std::vector<InhibitionGroup>& groups);

} // namespace sandnet
