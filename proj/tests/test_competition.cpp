#include <doctest.h>

#include <algorithm>
#include <random>

#include "sandnet/competition.hpp"

using namespace sandnet;

namespace {

// Three word-like neurons sharing two context inputs.
struct Rivalry {
    Network net{Config{}};
    NeuronId ctx1, ctx2, dog, cat, cow;

    Rivalry() {
        ctx1 = net.add_neuron();
        ctx2 = net.add_neuron();
        dog = net.add_neuron();
        cat = net.add_neuron();
        cow = net.add_neuron();
        for (NeuronId w : {dog, cat, cow}) {
            net.add_synapse(ctx1, w, 0.4, 1);
            net.add_synapse(ctx2, w, 0.4, 1);
        }
    }
};

} // namespace

TEST_CASE("networks with disjoint inputs form no groups") {
    Network net{Config{}};
    NeuronId s1 = net.add_neuron();
    NeuronId s2 = net.add_neuron();
    NeuronId a = net.add_neuron();
    NeuronId b = net.add_neuron();
    net.add_synapse(s1, a, 0.5, 1);
    net.add_synapse(s2, b, 0.5, 1);
    CHECK(build_groups(net, 1).empty());
}

TEST_CASE("rivals sharing context inputs form one group") {
    Rivalry r;
    auto groups = build_groups(r.net, 1);
    REQUIRE(groups.size() == 1);
    REQUIRE(groups[0].members.size() == 3);
    CHECK(groups[0].members[0] == r.dog);
    CHECK(groups[0].members[1] == r.cat);
    CHECK(groups[0].members[2] == r.cow);
}

TEST_CASE("an overlap threshold of two ignores single shared sources") {
    Network net{Config{}};
    NeuronId s = net.add_neuron();
    NeuronId a = net.add_neuron();
    NeuronId b = net.add_neuron();
    net.add_synapse(s, a, 0.5, 1);
    net.add_synapse(s, b, 0.5, 1);
    CHECK(build_groups(net, 1).size() == 1);
    CHECK(build_groups(net, 2).empty());
    CHECK_THROWS_AS(build_groups(net, 0), std::invalid_argument);
}

TEST_CASE("near-zero synapses do not make neurons rivals") {
    Network net{Config{}};
    NeuronId s = net.add_neuron();
    NeuronId a = net.add_neuron();
    NeuronId b = net.add_neuron();
    net.add_synapse(s, a, 0.01, 1); // below group_min_weight
    net.add_synapse(s, b, 0.01, 1);
    CHECK(build_groups(net, 1).empty());
}

TEST_CASE("winner is the member with the largest input sum") {
    Rivalry r;
    auto groups = build_groups(r.net, 1);
    REQUIRE(groups.size() == 1);
    std::vector<double> sigma(r.net.neuron_count(), 0.0);
    sigma[r.dog.v] = 2.0;
    sigma[r.cat.v] = 5.0;
    sigma[r.cow.v] = 1.0;
    CHECK(wta_winner(r.net, groups[0], sigma) == r.cat);
}

TEST_CASE("ties go to the lowest id") {
    Rivalry r;
    auto groups = build_groups(r.net, 1);
    std::vector<double> sigma(r.net.neuron_count(), 3.0);
    CHECK(wta_winner(r.net, groups[0], sigma) == r.dog);

    InhibitionGroup reversed;
    reversed.members = {r.cow, r.cat, r.dog}; // member order must not matter
    CHECK(wta_winner(r.net, reversed, sigma) == r.dog);
}

TEST_CASE("a two-member group resolves on any nonzero edge") {
    Network net{Config{}};
    NeuronId a = net.add_neuron();
    NeuronId b = net.add_neuron();
    InhibitionGroup g;
    g.members = {a, b};
    std::vector<double> sigma{0.0, 0.1};
    CHECK(wta_winner(net, g, sigma) == b);
}

TEST_CASE("empty groups and missing sigma entries are errors") {
    Network net{Config{}};
    net.add_neuron();
    InhibitionGroup empty;
    std::vector<double> sigma{1.0};
    CHECK_THROWS_AS(wta_winner(net, empty, sigma), std::invalid_argument);
    InhibitionGroup g;
    g.members = {NeuronId(0), NeuronId(7)};
    CHECK_THROWS_AS(wta_winner(net, g, sigma), std::out_of_range);
}

TEST_CASE("resolve_wta zeroes every loser and keeps exactly one winner") {
    Rivalry r;
    auto groups = build_groups(r.net, 1);
    std::vector<double> sigma(r.net.neuron_count(), 0.0);
    sigma[r.dog.v] = 10.0;
    sigma[r.cat.v] = 30.0;
    sigma[r.cow.v] = 20.0;
    for (NeuronId m : groups[0].members)
        r.net.neuron(m).rate = activation(sigma[m.v], r.net.params());

    NeuronId winner = resolve_wta(r.net, groups[0], sigma);
    CHECK(winner == r.cat);
    int nonzero = 0;
    for (NeuronId m : groups[0].members) {
        if (m == winner) {
            CHECK(r.net.neuron(m).rate ==
                  activation(sigma[m.v], r.net.params()));
            ++nonzero;
        } else {
            CHECK(r.net.neuron(m).rate == 0.0);
        }
    }
    CHECK(nonzero == 1);
}

TEST_CASE("scaling all inputs by a positive factor never changes the winner") {
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> size_dist(2, 6);
    std::uniform_real_distribution<double> sigma_dist(0.0, 50.0);
    std::uniform_real_distribution<double> lambda_dist(0.01, 20.0);

    Network net{Config{}};
    for (int i = 0; i < 8; ++i) net.add_neuron();

    for (int trial = 0; trial < 100; ++trial) {
        int size = size_dist(rng);
        InhibitionGroup g;
        std::vector<std::uint32_t> ids{0, 1, 2, 3, 4, 5, 6, 7};
        std::shuffle(ids.begin(), ids.end(), rng);
        for (int i = 0; i < size; ++i) g.members.push_back(NeuronId(ids[i]));
        std::vector<double> sigma(8, 0.0);
        for (NeuronId m : g.members) sigma[m.v] = sigma_dist(rng);

        NeuronId base = wta_winner(net, g, sigma);
        for (int k = 0; k < 10; ++k) {
            double lambda = lambda_dist(rng);
            std::vector<double> scaled = sigma;
            for (double& s : scaled) s *= lambda;
            CHECK(wta_winner(net, g, scaled) == base);
        }
    }
}

TEST_CASE("winner agrees with an exhaustive scan for small groups") {
    std::mt19937 rng(31);
    Network net{Config{}};
    for (int i = 0; i < 6; ++i) net.add_neuron();
    std::uniform_real_distribution<double> sigma_dist(0.0, 9.0);
    for (int trial = 0; trial < 200; ++trial) {
        InhibitionGroup g;
        for (int i = 0; i < 6; ++i) g.members.push_back(NeuronId(i));
        std::vector<double> sigma(6);
        for (double& s : sigma) s = sigma_dist(rng);

        NeuronId expect(0);
        for (std::uint32_t i = 1; i < 6; ++i)
            if (sigma[i] > sigma[expect.v]) expect = NeuronId(i);
        CHECK(wta_winner(net, g, sigma) == expect);
    }
}

TEST_CASE("group construction is deterministic") {
    Rivalry r1, r2;
    auto g1 = build_groups(r1.net, 1);
    auto g2 = build_groups(r2.net, 1);
    REQUIRE(g1.size() == g2.size());
    for (std::size_t i = 0; i < g1.size(); ++i) {
        REQUIRE(g1[i].members.size() == g2[i].members.size());
        for (std::size_t k = 0; k < g1[i].members.size(); ++k)
            CHECK(g1[i].members[k] == g2[i].members[k]);
    }
}

TEST_CASE("the soft mode penalizes rivals instead of zeroing them") {
    Rivalry r;
    r.net.config().competition.hard_wta = false;
    r.net.config().competition.inhibition_strength = 5.0;
    auto groups = build_groups(r.net, 1);
    PostActivationHook hook = wta_hook(groups);

    // Drive the two contexts so every rival receives the same input.
    step_network(r.net, {{r.ctx1, 40.0}, {r.ctx2, 40.0}});
    TickReport report = step_network(r.net, {{r.cat, 10.0}}, hook);
    // cat got extra drive; rivals are reduced but not silenced.
    CHECK(r.net.neuron(r.cat).rate > r.net.neuron(r.dog).rate);
    CHECK(r.net.neuron(r.dog).rate > 0.0);
    CHECK(report.sigma[r.dog.v] > 0.0);
}

TEST_CASE("fan-in mode scores by anatomical inputs, not activity") {
    Network net{Config{}};
    NeuronId s1 = net.add_neuron();
    NeuronId s2 = net.add_neuron();
    NeuronId s3 = net.add_neuron();
    NeuronId rich = net.add_neuron(); // three inputs
    NeuronId poor = net.add_neuron(); // one input
    for (NeuronId s : {s1, s2, s3}) net.add_synapse(s, rich, 0.4, 1);
    net.add_synapse(s1, poor, 0.4, 1);

    InhibitionGroup g;
    g.members = {rich, poor};
    std::vector<double> sigma(net.neuron_count(), 0.0);
    sigma[poor.v] = 50.0; // activity favors poor
    sigma[rich.v] = 1.0;

    CHECK(wta_winner(net, g, sigma) == poor);
    net.config().competition.fanin_mode = true;
    CHECK(wta_winner(net, g, sigma) == rich);
}
