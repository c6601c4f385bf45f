#include <doctest.h>

#include <set>

#include "sandnet/language.hpp"

using namespace sandnet;

namespace {

// The grounded-rivals setup: three animal words sharing two features, each
// with one distinctive feature.
struct Grounded {
    Network net{Config{}};
    Lexicon lex;
    NeuronId animal, four_legs, barks, meows, moos;

    Grounded() {
        for (const char* text : {"this", "is", "dog", "cat", "cow"})
            add_word(net, lex, text);
        animal = net.add_neuron();
        four_legs = net.add_neuron();
        barks = net.add_neuron();
        meows = net.add_neuron();
        moos = net.add_neuron();
        const double w = net.config().language.ground_weight;
        ground_word(net, lex, lex.word("dog"), {animal, four_legs, barks}, w);
        ground_word(net, lex, lex.word("cat"), {animal, four_legs, meows}, w);
        ground_word(net, lex, lex.word("cow"), {animal, four_legs, moos}, w);
    }
};

} // namespace

TEST_CASE("adding words allocates fresh neurons and rejects abuse") {
    Network net{Config{}};
    Lexicon lex;
    Word dog = add_word(net, lex, "dog");
    CHECK(net.has_neuron(dog.neuron));
    CHECK(lex.contains("dog"));
    CHECK(lex.word("dog").neuron == dog.neuron);

    CHECK_THROWS_AS(add_word(net, lex, ""), std::invalid_argument);
    CHECK_THROWS_AS(add_word(net, lex, "dog"), std::invalid_argument);
    Word cat = add_word(net, lex, "cat");
    CHECK(cat.neuron != dog.neuron);
}

TEST_CASE("grounding builds one synapse per feature") {
    Network net{Config{}};
    Lexicon lex;
    Word cat = add_word(net, lex, "cat");
    NeuronId furry = net.add_neuron();
    NeuronId meows = net.add_neuron();
    NeuronId small = net.add_neuron();
    ground_word(net, lex, cat, {furry, meows, small}, 0.4);

    CHECK(net.synapse_count() == 3);
    for (NeuronId f : {furry, meows, small}) {
        std::int64_t idx = net.find_synapse(f, cat.neuron);
        REQUIRE(idx >= 0);
        CHECK(net.synapse(static_cast<std::uint32_t>(idx)).weight.ltm == 0.4);
        CHECK(net.synapse(static_cast<std::uint32_t>(idx)).delay == 1);
    }
    CHECK(lex.grounding().edges.size() == 3);
}

TEST_CASE("repeated grounding strengthens up to the cap") {
    Network net{Config{}};
    Lexicon lex;
    Word cat = add_word(net, lex, "cat");
    NeuronId furry = net.add_neuron();
    ground_word(net, lex, cat, {furry}, 0.4);
    ground_word(net, lex, cat, {furry}, 0.4);
    std::int64_t idx = net.find_synapse(furry, cat.neuron);
    CHECK(net.synapse_count() == 1);
    CHECK(net.synapse(static_cast<std::uint32_t>(idx)).weight.ltm == 0.8);
    ground_word(net, lex, cat, {furry}, 0.4);
    CHECK(net.synapse(static_cast<std::uint32_t>(idx)).weight.ltm ==
          net.params().w_max);
}

TEST_CASE("grounding validates its inputs") {
    Network net{Config{}};
    Lexicon lex;
    Word cat = add_word(net, lex, "cat");
    NeuronId f = net.add_neuron();
    CHECK_THROWS_AS(ground_word(net, lex, cat, {}, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(ground_word(net, lex, cat, {f}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ground_word(net, lex, cat, {f}, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ground_word(net, lex, cat, {NeuronId(99)}, 0.4),
                    std::out_of_range);
}

TEST_CASE("a shared feature makes grounded words rivals") {
    Grounded g;
    auto groups = build_groups(g.net, 1);
    REQUIRE(groups.size() == 1);
    std::set<std::uint32_t> members;
    for (NeuronId m : groups[0].members) members.insert(m.v);
    CHECK(members == std::set<std::uint32_t>{g.lex.word("dog").neuron.v,
                                             g.lex.word("cat").neuron.v,
                                             g.lex.word("cow").neuron.v});
}

TEST_CASE("learning a sentence opens a slot where rivals compete") {
    Grounded g;
    SentencePattern p = learn_sentence(g.net, g.lex, {"this", "is", "dog"});
    REQUIRE(p.slots.size() == 3);
    CHECK_FALSE(p.slots[0].open);
    CHECK_FALSE(p.slots[1].open);
    CHECK(p.slots[2].open);
    REQUIRE(p.slots[2].pool.size() == 3);
    std::set<std::string> pool;
    for (const Word& w : p.slots[2].pool) pool.insert(w.text);
    CHECK(pool == std::set<std::string>{"dog", "cat", "cow"});
}

TEST_CASE("one-off ungrounded words yield a pattern without slots") {
    Network net{Config{}};
    Lexicon lex;
    for (const char* text : {"red", "sky", "falls"}) add_word(net, lex, text);
    SentencePattern p = learn_sentence(net, lex, {"red", "sky", "falls"});
    for (const SlotPosition& pos : p.slots) CHECK_FALSE(pos.open);
}

TEST_CASE("unknown words in a sentence are an error") {
    Network net{Config{}};
    Lexicon lex;
    add_word(net, lex, "this");
    CHECK_THROWS_AS(learn_sentence(net, lex, {"this", "ghost"}), std::out_of_range);
}

TEST_CASE("relearning a sentence strengthens the frame chain") {
    Network net{Config{}};
    Lexicon lex;
    for (const char* text : {"this", "is", "sky"}) add_word(net, lex, text);
    learn_sentence(net, lex, {"this", "is", "sky"}, 3);
    NeuronId t = lex.word("this").neuron, i = lex.word("is").neuron;
    double before = net.synapse(static_cast<std::uint32_t>(net.find_synapse(t, i)))
                        .weight.effective(net.params().w_max);
    learn_sentence(net, lex, {"this", "is", "sky"}, 3);
    double after = net.synapse(static_cast<std::uint32_t>(net.find_synapse(t, i)))
                       .weight.effective(net.params().w_max);
    CHECK(before > 0.0);
    CHECK(after > before);
}

TEST_CASE("context steers the open slot: the Fig. 1B generation demo") {
    Grounded g;
    SentencePattern p = learn_sentence(g.net, g.lex, {"this", "is", "dog"});

    SUBCASE("cat features produce a sentence never heard before") {
        auto sentence =
            generate_sentence(g.net, p, {g.animal, g.four_legs, g.meows});
        REQUIRE(sentence.size() == 3);
        CHECK(sentence[0] == "this");
        CHECK(sentence[1] == "is");
        CHECK(sentence[2] == "cat");
    }
    SUBCASE("dog features reproduce the learned sentence") {
        auto sentence =
            generate_sentence(g.net, p, {g.animal, g.four_legs, g.barks});
        CHECK(sentence == std::vector<std::string>{"this", "is", "dog"});
    }
    SUBCASE("cow features select cow") {
        auto sentence =
            generate_sentence(g.net, p, {g.animal, g.four_legs, g.moos});
        CHECK(sentence == std::vector<std::string>{"this", "is", "cow"});
    }
    SUBCASE("no context leaves the slot unresolved") {
        auto sentence = generate_sentence(g.net, p, {});
        CHECK(sentence == std::vector<std::string>{"this", "is", kUnknownToken});
    }
}

TEST_CASE("generation is deterministic for identical context") {
    Grounded g;
    SentencePattern p = learn_sentence(g.net, g.lex, {"this", "is", "dog"});
    Network reference = g.net;
    auto first = generate_sentence(g.net, p, {g.animal, g.four_legs, g.meows});
    for (int run = 0; run < 9; ++run) {
        Network copy = reference;
        CHECK(generate_sentence(copy, p, {g.animal, g.four_legs, g.meows}) == first);
    }
}

TEST_CASE("more grounding evidence never deposes a winning candidate") {
    Grounded g;
    NeuronId whiskers = g.net.add_neuron();
    NeuronId purrs = g.net.add_neuron();
    ground_word(g.net, g.lex, g.lex.word("cat"), {whiskers, purrs},
                g.net.config().language.ground_weight);
    SentencePattern p = learn_sentence(g.net, g.lex, {"this", "is", "dog"});

    std::vector<NeuronId> context{g.animal, g.four_legs, g.meows};
    Network base = g.net;
    auto sentence = generate_sentence(base, p, context);
    REQUIRE(sentence.back() == "cat");
    for (NeuronId extra : {whiskers, purrs}) {
        context.push_back(extra);
        Network copy = g.net;
        CHECK(generate_sentence(copy, p, context).back() == "cat");
    }
}

TEST_CASE("a handful of patterns and rivals spans many sentences") {
    Grounded g;
    for (const char* text : {"that", "was"}) add_word(g.net, g.lex, text);
    std::vector<SentencePattern> patterns;
    patterns.push_back(learn_sentence(g.net, g.lex, {"this", "is", "dog"}));
    patterns.push_back(learn_sentence(g.net, g.lex, {"that", "was", "dog"}));

    std::vector<std::vector<NeuronId>> contexts = {
        {g.animal, g.four_legs, g.barks},
        {g.animal, g.four_legs, g.meows},
        {g.animal, g.four_legs, g.moos},
    };
    std::set<std::string> sentences;
    for (const SentencePattern& p : patterns)
        for (const auto& ctx : contexts) {
            Network episode = g.net;
            auto tokens = generate_sentence(episode, p, ctx);
            std::string joined;
            for (const std::string& t : tokens) joined += t + " ";
            CHECK(tokens.back() != kUnknownToken);
            sentences.insert(joined);
        }
    // Two patterns x three rivals: six distinct sentences from seven words.
    CHECK(sentences.size() == 6);
    CHECK(g.lex.size() == 7);
}

TEST_CASE("a mid-sentence slot selects the subject from context") {
    Network net{Config{}};
    Lexicon lex;
    for (const char* text : {"the", "dog", "cat", "cow", "runs"})
        add_word(net, lex, text);
    NeuronId animal = net.add_neuron();
    NeuronId four_legs = net.add_neuron();
    NeuronId barks = net.add_neuron();
    NeuronId meows = net.add_neuron();
    NeuronId moos = net.add_neuron();
    const double w = net.config().language.ground_weight;
    ground_word(net, lex, lex.word("dog"), {animal, four_legs, barks}, w);
    ground_word(net, lex, lex.word("cat"), {animal, four_legs, meows}, w);
    ground_word(net, lex, lex.word("cow"), {animal, four_legs, moos}, w);

    SentencePattern p = learn_sentence(net, lex, {"the", "dog", "runs"});
    REQUIRE(p.slots.size() == 3);
    CHECK_FALSE(p.slots[0].open);
    CHECK(p.slots[1].open);
    CHECK_FALSE(p.slots[2].open);

    Network cat_net = net;
    CHECK(generate_sentence(cat_net, p, {animal, four_legs, meows}) ==
          std::vector<std::string>{"the", "cat", "runs"});
    Network none_net = net;
    CHECK(generate_sentence(none_net, p, {}) ==
          std::vector<std::string>{"the", kUnknownToken, "runs"});
}
