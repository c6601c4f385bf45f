#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sandnet/competition.hpp"
#include "sandnet/netcore.hpp"

namespace sandnet {

// One neuron per word; the word's connections with feature neurons carry its
// meaning, its connections with other words carry its syntax role.
struct Word {
    std::string text;
    NeuronId neuron;
};

struct GroundingEdge {
    NeuronId feature;
    NeuronId word;
    double weight;
};

// Multi-to-one map from feature/picture neurons to word neurons. The edges
// live in the Network as ordinary synapses; this is the registry view.
struct GroundingMap {
    std::vector<GroundingEdge> edges;
};

class Lexicon {
public:
    bool contains(const std::string& text) const { return words_.count(text) != 0; }
    const Word& word(const std::string& text) const;
    const Word* find_by_neuron(NeuronId id) const;
    std::size_t size() const { return words_.size(); }
    const std::map<std::string, Word>& words() const { return words_; }
    const GroundingMap& grounding() const { return grounding_; }

    // Snapshot plumbing: reattach an already-allocated registry.
    void restore(std::map<std::string, Word> words, GroundingMap grounding);

private:
    std::map<std::string, Word> words_;
    std::map<std::uint32_t, std::string> by_neuron_;
    GroundingMap grounding_;

    friend Word add_word(Network& net, Lexicon& lex, const std::string& text);
    friend void ground_word(Network& net, Lexicon& lex, const Word& word,
                            const std::vector<NeuronId>& features, double weight);
};

// A learned sentence position: either a fixed word or an open slot whose
// pool competes by lateral inhibition.
struct SlotPosition {
    bool open = false;
    Word word;                  // the word the sentence was learned with
    std::vector<Word> pool;     // open slots: all competing candidates
    InhibitionGroup group;      // open slots: the competition group
};

struct SentencePattern {
    std::vector<SlotPosition> slots;
    std::uint32_t gap = 2;
};

inline const char* kUnknownToken = "UNKNOWN";

// Registers a new word on a fresh neuron. Empty or duplicate text errors.
Word add_word(Network& net, Lexicon& lex, const std::string& text);

// Creates (or additively strengthens, capped at w_max) delay-1 synapses
// from every feature neuron to the word neuron.
void ground_word(Network& net, Lexicon& lex, const Word& word,
                 const std::vector<NeuronId>& features, double weight);

// Trains the word-neuron chain, then marks as open every position whose
// word sits in a competition group of rivals. Chain links into open
// positions are renormalized to the sub-threshold priming weight, so a
// slot fires only with grounding evidence behind it.
SentencePattern learn_sentence(Network& net, Lexicon& lex,
                               const std::vector<std::string>& words,
                               std::uint32_t reps = 0); // 0: config default

// Replays the pattern with the context features injected throughout. Fixed
// positions emit their word; each open slot emits the winner of its pool,
// or UNKNOWN when no candidate reaches the firing threshold.
std::vector<std::string> generate_sentence(Network& net,
                                           const SentencePattern& pattern,
                                           const std::vector<NeuronId>& context);

} // namespace sandnet
