#include "sandnet/language.hpp"

#include <algorithm>
#include <stdexcept>

#include "sandnet/sequence.hpp"

namespace sandnet {

const Word& Lexicon::word(const std::string& text) const {
    auto it = words_.find(text);
    if (it == words_.end())
        throw std::out_of_range("lexicon: unknown word '" + text + "'");
    return it->second;
}

const Word* Lexicon::find_by_neuron(NeuronId id) const {
    auto it = by_neuron_.find(id.v);
    if (it == by_neuron_.end()) return nullptr;
    return &words_.at(it->second);
}

void Lexicon::restore(std::map<std::string, Word> words, GroundingMap grounding) {
    words_ = std::move(words);
    grounding_ = std::move(grounding);
    by_neuron_.clear();
    for (const auto& [text, word] : words_) by_neuron_.emplace(word.neuron.v, text);
}

Word add_word(Network& net, Lexicon& lex, const std::string& text) {
    if (text.empty()) throw std::invalid_argument("add_word: empty text");
    if (lex.contains(text))
        throw std::invalid_argument("add_word: duplicate word '" + text + "'");
    Word w{text, net.add_neuron(NeuronKind::excitatory)};
    lex.words_.emplace(text, w);
    lex.by_neuron_.emplace(w.neuron.v, text);
    return w;
}

void ground_word(Network& net, Lexicon& lex, const Word& word,
                 const std::vector<NeuronId>& features, double weight) {
    if (features.empty())
        throw std::invalid_argument("ground_word: empty feature set");
    if (!(weight > 0.0) || weight > net.params().w_max)
        throw std::invalid_argument("ground_word: weight must be in (0, w_max]");
    for (NeuronId f : features) {
        if (!net.has_neuron(f))
            throw std::out_of_range("ground_word: unknown feature neuron");
        std::int64_t idx = net.find_synapse(f, word.neuron);
        if (idx < 0) {
            net.add_synapse(f, word.neuron, weight, 1);
        } else {
            DualTraceWeight& w = net.synapse(static_cast<std::uint32_t>(idx)).weight;
            w.ltm = std::min(w.ltm + weight, net.params().w_max);
        }
        lex.grounding_.edges.push_back({f, word.neuron, weight});
    }
}

SentencePattern learn_sentence(Network& net, Lexicon& lex,
                               const std::vector<std::string>& words,
                               std::uint32_t reps) {
    if (words.empty()) throw std::invalid_argument("learn_sentence: empty sentence");
    const LanguageParams& lp = net.config().language;

    SequenceSpec spec;
    for (const std::string& text : words)
        spec.items.push_back(lex.word(text).neuron);  // throws on unknown words
    spec.gap = lp.gap;
    spec.strength = lp.generate_strength;
    spec.repetitions = reps == 0 ? lp.learn_reps : reps;
    train_sequence(net, spec);

    const auto groups =
        build_groups(net, net.config().competition.overlap_threshold);

    SentencePattern pattern;
    pattern.gap = lp.gap;
    for (std::size_t i = 0; i < words.size(); ++i) {
        SlotPosition pos;
        pos.word = lex.word(words[i]);
        for (const InhibitionGroup& g : groups) {
            if (!std::binary_search(g.members.begin(), g.members.end(),
                                    pos.word.neuron))
                continue;
            pos.open = true;
            pos.group = g;
            for (NeuronId m : g.members)
                if (const Word* w = lex.find_by_neuron(m)) pos.pool.push_back(*w);
            break;
        }
        pattern.slots.push_back(std::move(pos));
    }

    // A link into a competitive position only primes it; selection needs
    // grounding evidence on top, so the trained weight is renormalized down.
    for (std::size_t i = 1; i < pattern.slots.size(); ++i) {
        if (!pattern.slots[i].open) continue;
        std::int64_t idx = net.find_synapse(pattern.slots[i - 1].word.neuron,
                                            pattern.slots[i].word.neuron);
        if (idx >= 0) {
            DualTraceWeight& w = net.synapse(static_cast<std::uint32_t>(idx)).weight;
            w.ltm = lp.slot_priming;
            w.stm = 0.0;
        }
    }
    return pattern;
}

std::vector<std::string> generate_sentence(Network& net,
                                           const SentencePattern& pattern,
                                           const std::vector<NeuronId>& context) {
    if (pattern.slots.empty())
        throw std::invalid_argument("generate_sentence: empty pattern");
    const LanguageParams& lp = net.config().language;
    for (NeuronId f : context)
        if (!net.has_neuron(f))
            throw std::out_of_range("generate_sentence: unknown context feature");

    std::vector<InhibitionGroup> groups;
    for (const SlotPosition& pos : pattern.slots)
        if (pos.open) groups.push_back(pos.group);
    PostActivationHook hook = wta_hook(groups);

    std::vector<std::string> tokens;
    const std::uint64_t start = net.tick();
    const std::uint64_t last_onset =
        start + (pattern.slots.size() - 1) * pattern.gap;

    std::size_t position = 0;
    for (std::uint64_t t = start; t <= last_onset; ++t) {
        ExternalInput ext;
        for (NeuronId f : context) ext[f] += lp.context_strength;
        bool onset = (t - start) % pattern.gap == 0 && position < pattern.slots.size();
        const SlotPosition* pos = onset ? &pattern.slots[position] : nullptr;
        if (pos && !pos->open) ext[pos->word.neuron] += lp.generate_strength;

        step_network(net, ext, hook);

        if (pos) {
            if (!pos->open) {
                tokens.push_back(pos->word.text);
            } else {
                // Hard WTA leaves at most one candidate above threshold; the
                // soft mode can leave several, so take the strongest.
                std::string token = kUnknownToken;
                double best = 0.0;
                for (const Word& cand : pos->pool) {
                    double rate = net.neuron(cand.neuron).rate;
                    if (rate >= net.params().f_thr && rate > best) {
                        token = cand.text;
                        best = rate;
                    }
                }
                tokens.push_back(token);
            }
            ++position;
        }
    }
    return tokens;
}

} // namespace sandnet
