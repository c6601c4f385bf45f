#include <doctest.h>

#include <algorithm>

#include "sandnet/sequence.hpp"

using namespace sandnet;

namespace {

std::vector<NeuronId> make_neurons(Network& net, std::size_t n) {
    std::vector<NeuronId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(net.add_neuron());
    return ids;
}

} // namespace

TEST_CASE("training an ordered pair tips the weights forward") {
    Network net{Config{}};
    auto ids = make_neurons(net, 2);
    SequenceSpec spec;
    spec.items = ids;
    spec.gap = 2;
    spec.repetitions = 20;
    spec.strength = 40.0;
    train_sequence(net, spec);

    const double w_max = net.params().w_max;
    double fwd = net.synapse(static_cast<std::uint32_t>(net.find_synapse(ids[0], ids[1])))
                     .weight.effective(w_max);
    double bwd = net.synapse(static_cast<std::uint32_t>(net.find_synapse(ids[1], ids[0])))
                     .weight.effective(w_max);
    CHECK(fwd > bwd);
    CHECK(fwd > 0.5);
}

TEST_CASE("a single-item sequence trains nothing") {
    Network net{Config{}};
    auto ids = make_neurons(net, 1);
    SequenceSpec spec;
    spec.items = ids;
    spec.repetitions = 3;
    TrainingReport report = train_sequence(net, spec);
    CHECK(report.pairs.empty());
    CHECK(net.synapse_count() == 0);
}

TEST_CASE("bad sequence specs are rejected") {
    Network net{Config{}};
    auto ids = make_neurons(net, 2);
    SequenceSpec spec;
    CHECK_THROWS_AS(train_sequence(net, spec), std::invalid_argument); // empty
    spec.items = {ids[0], NeuronId(55)};
    CHECK_THROWS_AS(train_sequence(net, spec), std::out_of_range);
    spec.items = ids;
    spec.gap = 0;
    CHECK_THROWS_AS(train_sequence(net, spec), std::invalid_argument);
}

TEST_CASE("adjacent pairs in a chain gain comparable margins") {
    Network net{Config{}};
    auto ids = make_neurons(net, 3);
    SequenceSpec spec;
    spec.items = ids;
    spec.gap = 2;
    spec.repetitions = 6; // below saturation so the comparison is informative
    TrainingReport report = train_sequence(net, spec);
    REQUIRE(report.pairs.size() == 2);

    double m01 = report.pairs[0].forward.back() - report.pairs[0].backward.back();
    double m12 = report.pairs[1].forward.back() - report.pairs[1].backward.back();
    CHECK(m01 > 0.0);
    CHECK(m12 > 0.0);
    CHECK(std::abs(m01 - m12) / std::max(m01, m12) < 0.10);
}

TEST_CASE("forward margins grow monotonically until saturation") {
    Network net{Config{}};
    auto ids = make_neurons(net, 2);
    SequenceSpec spec;
    spec.items = ids;
    spec.gap = 2;
    spec.repetitions = 30;
    TrainingReport report = train_sequence(net, spec);
    const auto& fwd = report.pairs[0].forward;
    const auto& bwd = report.pairs[0].backward;
    bool saturated = false;
    for (std::size_t rep = 1; rep < fwd.size(); ++rep) {
        double margin = fwd[rep] - bwd[rep];
        double prev = fwd[rep - 1] - bwd[rep - 1];
        if (saturated)
            CHECK(margin >= prev);
        else
            CHECK(margin > prev);
        if (fwd[rep] >= net.params().w_max) saturated = true;
    }
    CHECK(saturated);
}

TEST_CASE("recall reproduces the trained order from the head cue") {
    for (std::uint32_t gap : {1u, 2u, 4u}) {
        Network net{Config{}};
        auto ids = make_neurons(net, 4);
        SequenceSpec spec;
        spec.items = ids;
        spec.gap = gap;
        spec.repetitions = 25;
        train_sequence(net, spec);

        std::vector<NeuronId> order = recall_sequence(net, ids[0], 4);
        REQUIRE(order.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) CHECK(order[i] == ids[i]);
    }
}

TEST_CASE("an untrained cue recalls only itself") {
    Network net{Config{}};
    auto ids = make_neurons(net, 3);
    std::vector<NeuronId> order = recall_sequence(net, ids[0], 3);
    REQUIRE(order.size() == 1);
    CHECK(order[0] == ids[0]);
}

TEST_CASE("a cue too weak to fire recalls nothing") {
    Config cfg;
    cfg.sequence.recall_strength = 1.0; // activation(1) is far below f_thr
    Network net{cfg};
    auto ids = make_neurons(net, 2);
    CHECK(recall_sequence(net, ids[0], 2).empty());
}

TEST_CASE("cueing the middle of a chain never re-fires earlier items") {
    Network net{Config{}};
    auto ids = make_neurons(net, 3);
    SequenceSpec spec;
    spec.items = ids;
    spec.gap = 2;
    spec.repetitions = 25;
    train_sequence(net, spec);

    std::vector<NeuronId> order = recall_sequence(net, ids[1], 3);
    REQUIRE(order.size() == 2);
    CHECK(order[0] == ids[1]);
    CHECK(order[1] == ids[2]);
    CHECK(std::find(order.begin(), order.end(), ids[0]) == order.end());
    CHECK(net.neuron(ids[0]).rate < net.params().f_thr);
}

TEST_CASE("object encoding anchors on the most frequent view") {
    Network net{Config{}};
    auto v = make_neurons(net, 3);
    ObjectCircuit circuit =
        encode_object(net, v, {v[0], v[1], v[2], v[0], v[2], v[0]});
    CHECK(circuit.anchor == v[0]);

    // The anchor's summed outgoing long-term weight tops every other view.
    auto outgoing_ltm = [&](NeuronId view) {
        double sum = 0.0;
        for (std::uint32_t idx : net.outgoing(view))
            sum += net.synapse(idx).weight.ltm;
        return sum;
    };
    for (NeuronId view : v)
        CHECK(outgoing_ltm(circuit.anchor) >= outgoing_ltm(view));
}

TEST_CASE("equal view frequency anchors on the first presented") {
    Network net{Config{}};
    auto v = make_neurons(net, 2);
    ObjectCircuit circuit = encode_object(net, v, {v[1], v[0]});
    CHECK(circuit.anchor == v[1]);
}

TEST_CASE("object encoding requires at least two views and a real order") {
    Network net{Config{}};
    auto v = make_neurons(net, 1);
    CHECK_THROWS_AS(encode_object(net, v, v), std::invalid_argument);
    auto v2 = make_neurons(net, 2);
    CHECK_THROWS_AS(encode_object(net, v2, {}), std::invalid_argument);
    CHECK_THROWS_AS(encode_object(net, v2, {NeuronId(77)}), std::invalid_argument);
}

TEST_CASE("any view cue retrieves the whole circuit") {
    Network net{Config{}};
    auto v = make_neurons(net, 3);
    encode_object(net, v, {v[0], v[1], v[2], v[0], v[2], v[0]});

    for (NeuronId cue : v) {
        Network probe = net; // fresh copy per retrieval episode
        std::vector<NeuronId> order = recall_sequence(probe, cue, 6);
        for (NeuronId view : v)
            CHECK(std::find(order.begin(), order.end(), view) != order.end());
    }
}

TEST_CASE("clue count decides the reported retrieval mode") {
    Network net{Config{}};
    auto clues = make_neurons(net, 8);
    auto pool = make_neurons(net, 2);
    for (NeuronId c : clues) net.add_synapse(c, pool[0], 0.4, 1);
    net.add_synapse(clues[0], pool[1], 0.4, 1);

    RecognitionResult one = recognize(net, {clues[0]}, pool);
    CHECK(one.mode == RetrievalMode::association);

    Network net2 = net;
    RecognitionResult many = recognize(net2, clues, pool);
    CHECK(many.mode == RetrievalMode::recognition);
    CHECK(many.winner == pool[0]); // eight clues converge there
}

TEST_CASE("recognition picks the candidate the clues point at") {
    Network net{Config{}};
    auto v = make_neurons(net, 3);        // candidate views
    auto clues = make_neurons(net, 3);
    for (NeuronId c : clues) net.add_synapse(c, v[1], 0.5, 1);
    net.add_synapse(clues[0], v[0], 0.5, 1);

    RecognitionResult r = recognize(net, clues, v);
    CHECK(r.winner == v[1]);
    CHECK_THROWS_AS(recognize(net, {}, v), std::invalid_argument);
}
