#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sandnet/netcore.hpp"

namespace sandnet {

// Convergent-then-divergent layered graph; the strictly smallest middle
// layer is the waist ("kernel").
struct SandglassSpec {
    std::vector<std::uint32_t> layer_sizes; // >= 3 layers
    std::uint32_t fan_in = 2;   // per-neuron connection count on the wider side
    std::uint32_t delay = 1;    // inter-layer conduction delay
    double weight = 0.3;        // initial long-term weight
    std::uint64_t seed = 1;
};

struct PositionReport {
    NeuronId neuron;
    std::optional<std::uint32_t> distance_from_inputs; // min over input set
    std::uint32_t reach = 0;     // output units reachable from here
    double influence = 0.0;      // peak rate shift under input probing
    double autonomy = 1.0;       // 1 - normalized input influence
};

// Deterministic per seed. Adjacent layers are wired so that every neuron of
// the wider layer carries exactly fan_in links to the narrower one, spread
// evenly over a seeded permutation; the narrow side is always covered.
// Throws when the spec has no strict interior waist.
Network build_sandglass(const SandglassSpec& spec, const Config& cfg = {});

// Index ranges of each layer in build order.
std::vector<std::vector<NeuronId>> sandglass_layers(const SandglassSpec& spec);

// Shortest directed path in synapse hops; nullopt when unreachable.
std::optional<std::uint32_t> logic_distance(const Network& net, NeuronId from,
                                            NeuronId to);

// Per-neuron peak |rate difference| between a probed run (constant
// injection at source) and an unprobed run over the horizon. Pure: both
// runs use private copies.
std::vector<double> influence_score(const Network& net, NeuronId source,
                                    double probe_strength, std::uint32_t horizon);

// score = (distance-from-inputs / max distance) * (reach / |outputs|);
// far-from-input neurons that still command many outputs rank first, which
// singles out the waist of a sandglass. Descending, ties by id.
std::vector<std::pair<NeuronId, double>> find_kernel(
    const Network& net, const std::vector<NeuronId>& inputs,
    const std::vector<NeuronId>& outputs);

// Full positional audit, including probe-based influence and autonomy.
std::vector<PositionReport> measure_positions(const Network& net,
                                              const std::vector<NeuronId>& inputs,
                                              const std::vector<NeuronId>& outputs,
                                              double probe_strength,
                                              std::uint32_t horizon);

} // namespace sandnet
