#pragma once

#include <cstdint>
#include <vector>

#include "sandnet/netcore.hpp"
#include "sandnet/plasticity.hpp"

namespace sandnet {

struct SequenceSpec {
    std::vector<NeuronId> items;   // non-empty, presentation order
    std::uint32_t gap = 2;         // ticks between item onsets, >= 1
    double strength = 40.0;        // injection rate per item
    std::uint32_t repetitions = 20;
};

// Per consecutive pair, the forward/backward effective weights after each
// repetition.
struct PairTrajectory {
    NeuronId from;
    NeuronId to;
    std::vector<double> forward;
    std::vector<double> backward;
};

struct TrainingReport {
    std::vector<PairTrajectory> pairs;
};

// A set of views associated into a circuit; the anchor is the most frequent
// (ties: first presented) view and carries the strongest outgoing weights.
struct ObjectCircuit {
    std::vector<NeuronId> views;
    NeuronId anchor;
    std::vector<std::uint32_t> ring; // synapse indices trained by the encoding
};

enum class RetrievalMode { association, recognition };

struct RecognitionResult {
    NeuronId winner;
    RetrievalMode mode;
};

// Presents the items as timed injections, repetitions times, with temporal
// plasticity running and a consolidation pass after every repetition.
// Consecutive items get forward and backward synapses with delay == gap
// (created when absent); afterwards every forward weight exceeds its
// backward counterpart.
TrainingReport train_sequence(Network& net, const SequenceSpec& spec);

// Injects only the cue and returns neurons in first-firing order over
// max_len * max_delay ticks. An unheard cue yields an empty list.
std::vector<NeuronId> recall_sequence(Network& net, NeuronId cue,
                                      std::uint32_t max_len);

// Trains pairwise associations by presenting the views in the given order
// (closing the loop back to the first view), object_reps times.
ObjectCircuit encode_object(Network& net, const std::vector<NeuronId>& views,
                            const std::vector<NeuronId>& presentation_order);

// Injects all clues and resolves the target pool by winner-take-all on the
// resulting input sums. The mode is a reported label: few clues read as
// association, many as recognition; the mechanism is one and the same.
RecognitionResult recognize(Network& net, const std::vector<NeuronId>& clues,
                            const std::vector<NeuronId>& target_pool);

} // namespace sandnet
