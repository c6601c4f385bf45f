#include "sandnet/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace sandnet {

namespace {

constexpr char kMagic[8] = {'S', 'A', 'N', 'D', 'N', 'E', 'T', '\0'};

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x00000100000001b3ull;

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t size,
                    std::uint64_t hash = kFnvOffset) {
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= data[i];
        hash *= kFnvPrime;
    }
    return hash;
}

struct ByteWriter {
    std::vector<std::uint8_t> bytes;

    void u8(std::uint8_t v) { bytes.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xff);
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back((v >> (8 * i)) & 0xff);
    }
    void i8(std::int8_t v) { bytes.push_back(static_cast<std::uint8_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes.insert(bytes.end(), s.begin(), s.end());
    }
};

struct ByteReader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > size)
            throw std::runtime_error("snapshot: truncated payload");
    }
    std::uint8_t u8() {
        need(1);
        return data[pos++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(data[pos++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(data[pos++]) << (8 * i);
        return v;
    }
    std::int8_t i8() { return static_cast<std::int8_t>(u8()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        std::uint32_t n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(data + pos), n);
        pos += n;
        return s;
    }
};

void write_config(ByteWriter& w, const Config& c) {
    w.f64(c.net.c1); w.f64(c.net.c2); w.f64(c.net.f_thr);
    w.f64(c.net.w_max); w.f64(c.net.s_max); w.u64(c.net.rng_seed);
    w.f64(c.plasticity.a_plus); w.f64(c.plasticity.a_minus);
    w.f64(c.plasticity.tau_plus); w.f64(c.plasticity.tau_minus);
    w.f64(c.plasticity.eta_cofire); w.f64(c.plasticity.tau_stm);
    w.f64(c.plasticity.consolidate_rate); w.u32(c.plasticity.window_w);
    w.u8(c.plasticity.grow_new); w.u32(c.plasticity.grow_threshold);
    w.f64(c.plasticity.grow_init_weight);
    w.u32(c.competition.overlap_threshold); w.u8(c.competition.hard_wta);
    w.f64(c.competition.inhibition_strength); w.u8(c.competition.fanin_mode);
    w.f64(c.competition.group_min_weight);
    w.f64(c.sequence.train_strength); w.f64(c.sequence.recall_strength);
    w.u32(c.sequence.rest); w.f64(c.sequence.object_strength);
    w.u32(c.sequence.object_gap); w.u32(c.sequence.object_reps);
    w.f64(c.sequence.recognize_strength); w.u32(c.sequence.assoc_cutoff);
    w.f64(c.language.ground_weight); w.f64(c.language.context_strength);
    w.f64(c.language.generate_strength); w.f64(c.language.slot_priming);
    w.u32(c.language.gap); w.u32(c.language.learn_reps);
    w.u32(c.logic.d_rule); w.f64(c.logic.safety);
    w.f64(c.logic.inhibition_factor); w.f64(c.logic.fact_strength);
    w.u32(c.logic.horizon);
}

Config read_config(ByteReader& r) {
    Config c;
    c.net.c1 = r.f64(); c.net.c2 = r.f64(); c.net.f_thr = r.f64();
    c.net.w_max = r.f64(); c.net.s_max = r.f64(); c.net.rng_seed = r.u64();
    c.plasticity.a_plus = r.f64(); c.plasticity.a_minus = r.f64();
    c.plasticity.tau_plus = r.f64(); c.plasticity.tau_minus = r.f64();
    c.plasticity.eta_cofire = r.f64(); c.plasticity.tau_stm = r.f64();
    c.plasticity.consolidate_rate = r.f64(); c.plasticity.window_w = r.u32();
    c.plasticity.grow_new = r.u8() != 0; c.plasticity.grow_threshold = r.u32();
    c.plasticity.grow_init_weight = r.f64();
    c.competition.overlap_threshold = r.u32(); c.competition.hard_wta = r.u8() != 0;
    c.competition.inhibition_strength = r.f64();
    c.competition.fanin_mode = r.u8() != 0;
    c.competition.group_min_weight = r.f64();
    c.sequence.train_strength = r.f64(); c.sequence.recall_strength = r.f64();
    c.sequence.rest = r.u32(); c.sequence.object_strength = r.f64();
    c.sequence.object_gap = r.u32(); c.sequence.object_reps = r.u32();
    c.sequence.recognize_strength = r.f64(); c.sequence.assoc_cutoff = r.u32();
    c.language.ground_weight = r.f64(); c.language.context_strength = r.f64();
    c.language.generate_strength = r.f64(); c.language.slot_priming = r.f64();
    c.language.gap = r.u32(); c.language.learn_reps = r.u32();
    c.logic.d_rule = r.u32(); c.logic.safety = r.f64();
    c.logic.inhibition_factor = r.f64(); c.logic.fact_strength = r.f64();
    c.logic.horizon = r.u32();
    return c;
}

void write_network(ByteWriter& w, const Network& net) {
    write_config(w, net.config());
    w.u64(net.tick());
    w.u64(net.rng_state());
    w.u32(static_cast<std::uint32_t>(net.neuron_count()));
    for (std::uint32_t i = 0; i < net.neuron_count(); ++i) {
        const Neuron& n = net.neuron(NeuronId(i));
        w.u8(static_cast<std::uint8_t>(n.kind));
        w.u8(n.fired ? 1 : 0);
        w.f64(n.rate);
    }
    w.u32(static_cast<std::uint32_t>(net.synapse_count()));
    for (std::uint32_t i = 0; i < net.synapse_count(); ++i) {
        const Synapse& s = net.synapse(i);
        w.u32(s.pre.v);
        w.u32(s.post.v);
        w.f64(s.weight.ltm);
        w.f64(s.weight.stm);
        w.u32(s.delay);
        w.i8(static_cast<std::int8_t>(s.sign));
        // Buffer serialized oldest-first so the head is canonically 0.
        for (std::uint32_t k = 0; k < s.delay; ++k)
            w.f64(s.buf[(s.head + k) % s.delay]);
    }
    std::uint32_t entries = 0;
    for (const auto& [tick, m] : net.schedule())
        entries += static_cast<std::uint32_t>(m.size());
    w.u32(entries);
    for (const auto& [tick, m] : net.schedule())
        for (const auto& [id, strength] : m) {
            w.u64(tick);
            w.u32(id);
            w.f64(strength);
        }
}

Network read_network(ByteReader& r) {
    Config cfg = read_config(r);
    Network net(cfg);
    std::uint64_t tick = r.u64();
    std::uint64_t rng = r.u64();

    std::uint32_t n_neurons = r.u32();
    std::vector<Neuron> neurons;
    neurons.reserve(n_neurons);
    for (std::uint32_t i = 0; i < n_neurons; ++i) {
        Neuron n;
        n.id = NeuronId(i);
        n.kind = static_cast<NeuronKind>(r.u8());
        n.fired = r.u8() != 0;
        n.rate = r.f64();
        neurons.push_back(n);
    }

    std::uint32_t n_synapses = r.u32();
    std::vector<Synapse> synapses;
    synapses.reserve(n_synapses);
    for (std::uint32_t i = 0; i < n_synapses; ++i) {
        Synapse s;
        s.pre = NeuronId(r.u32());
        s.post = NeuronId(r.u32());
        s.weight.ltm = r.f64();
        s.weight.stm = r.f64();
        s.delay = r.u32();
        s.sign = r.i8();
        if (s.delay == 0) throw std::runtime_error("snapshot: zero delay");
        s.buf.resize(s.delay);
        for (std::uint32_t k = 0; k < s.delay; ++k) s.buf[k] = r.f64();
        s.head = 0;
        synapses.push_back(std::move(s));
    }

    std::map<std::uint64_t, std::map<std::uint32_t, double>> schedule;
    std::uint32_t entries = r.u32();
    for (std::uint32_t i = 0; i < entries; ++i) {
        std::uint64_t t = r.u64();
        std::uint32_t id = r.u32();
        schedule[t][id] = r.f64();
    }

    net.restore(std::move(neurons), std::move(synapses), tick, rng,
                std::move(schedule));
    return net;
}

void write_session_extras(ByteWriter& w, const Session& s) {
    w.u32(static_cast<std::uint32_t>(s.lexicon.words().size()));
    for (const auto& [text, word] : s.lexicon.words()) {
        w.str(text);
        w.u32(word.neuron.v);
    }
    w.u32(static_cast<std::uint32_t>(s.lexicon.grounding().edges.size()));
    for (const GroundingEdge& e : s.lexicon.grounding().edges) {
        w.u32(e.feature.v);
        w.u32(e.word.v);
        w.f64(e.weight);
    }
    w.u32(static_cast<std::uint32_t>(s.patterns.size()));
    for (const SentencePattern& p : s.patterns) {
        w.u32(p.gap);
        w.u32(static_cast<std::uint32_t>(p.slots.size()));
        for (const SlotPosition& pos : p.slots) {
            w.u8(pos.open ? 1 : 0);
            w.str(pos.word.text);
            w.u32(pos.word.neuron.v);
            if (!pos.open) continue;
            w.u32(static_cast<std::uint32_t>(pos.pool.size()));
            for (const Word& cand : pos.pool) {
                w.str(cand.text);
                w.u32(cand.neuron.v);
            }
            w.u32(static_cast<std::uint32_t>(pos.group.members.size()));
            for (NeuronId m : pos.group.members) w.u32(m.v);
            w.u32(pos.group.overlap_threshold);
            w.f64(pos.group.inhibition_strength);
        }
    }
    w.u32(static_cast<std::uint32_t>(s.names.size()));
    for (const auto& [name, id] : s.names) {
        w.str(name);
        w.u32(id.v);
    }
}

void read_session_extras(ByteReader& r, Session& s) {
    std::map<std::string, Word> words;
    std::uint32_t n_words = r.u32();
    for (std::uint32_t i = 0; i < n_words; ++i) {
        std::string text = r.str();
        NeuronId id(r.u32());
        words.emplace(text, Word{text, id});
    }
    GroundingMap grounding;
    std::uint32_t n_edges = r.u32();
    for (std::uint32_t i = 0; i < n_edges; ++i) {
        GroundingEdge e;
        e.feature = NeuronId(r.u32());
        e.word = NeuronId(r.u32());
        e.weight = r.f64();
        grounding.edges.push_back(e);
    }
    s.lexicon.restore(std::move(words), std::move(grounding));

    std::uint32_t n_patterns = r.u32();
    for (std::uint32_t i = 0; i < n_patterns; ++i) {
        SentencePattern p;
        p.gap = r.u32();
        std::uint32_t n_slots = r.u32();
        for (std::uint32_t k = 0; k < n_slots; ++k) {
            SlotPosition pos;
            pos.open = r.u8() != 0;
            pos.word.text = r.str();
            pos.word.neuron = NeuronId(r.u32());
            if (pos.open) {
                std::uint32_t n_pool = r.u32();
                for (std::uint32_t m = 0; m < n_pool; ++m) {
                    Word cand;
                    cand.text = r.str();
                    cand.neuron = NeuronId(r.u32());
                    pos.pool.push_back(std::move(cand));
                }
                std::uint32_t n_members = r.u32();
                for (std::uint32_t m = 0; m < n_members; ++m)
                    pos.group.members.push_back(NeuronId(r.u32()));
                pos.group.overlap_threshold = r.u32();
                pos.group.inhibition_strength = r.f64();
            }
            p.slots.push_back(std::move(pos));
        }
        s.patterns.push_back(std::move(p));
    }

    std::uint32_t n_names = r.u32();
    for (std::uint32_t i = 0; i < n_names; ++i) {
        std::string name = r.str();
        s.names.emplace(name, NeuronId(r.u32()));
    }
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& payload) {
    ByteWriter head;
    head.bytes.insert(head.bytes.end(), kMagic, kMagic + 8);
    head.u32(kSnapshotVersion);
    head.u64(payload.size());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("snapshot: cannot write " + path);
    out.write(reinterpret_cast<const char*>(head.bytes.data()),
              static_cast<std::streamsize>(head.bytes.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    ByteWriter tail;
    tail.u64(fnv1a(payload.data(), payload.size()));
    out.write(reinterpret_cast<const char*>(tail.bytes.data()), 8);
    if (!out) throw std::runtime_error("snapshot: write failed for " + path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());

    if (bytes.size() < 8 + 4 + 8 + 8)
        throw std::runtime_error("snapshot: file too short (truncated?)");
    if (std::memcmp(bytes.data(), kMagic, 8) != 0)
        throw std::runtime_error("snapshot: bad magic, not a snapshot file");

    ByteReader header{bytes.data() + 8, bytes.size() - 8};
    std::uint32_t version = header.u32();
    if (version != kSnapshotVersion)
        throw std::runtime_error("snapshot: format version " +
                                 std::to_string(version) +
                                 " unsupported (expected " +
                                 std::to_string(kSnapshotVersion) + ")");
    std::uint64_t payload_size = header.u64();
    std::size_t payload_off = 8 + 4 + 8;
    if (bytes.size() != payload_off + payload_size + 8)
        throw std::runtime_error("snapshot: size mismatch (truncated?)");

    std::uint64_t actual = fnv1a(bytes.data() + payload_off, payload_size);
    // The checksum is stored little-endian; recompose for comparison.
    std::uint64_t stored_le = 0;
    for (int i = 0; i < 8; ++i)
        stored_le |= std::uint64_t(bytes[payload_off + payload_size + i]) << (8 * i);
    if (stored_le != actual)
        throw std::runtime_error("snapshot: checksum mismatch (corrupt file)");
    return std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(payload_off),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(payload_off + payload_size));
}

} // namespace

void save_snapshot(const Session& session, const std::string& path) {
    ByteWriter w;
    write_network(w, session.net);
    w.u8(1); // session extras present
    write_session_extras(w, session);
    write_file(path, w.bytes);
}

void save_snapshot(const Network& net, const std::string& path) {
    ByteWriter w;
    write_network(w, net);
    w.u8(0);
    write_file(path, w.bytes);
}

Session load_snapshot(const std::string& path) {
    std::vector<std::uint8_t> payload = read_file(path);
    ByteReader r{payload.data(), payload.size()};
    Session session;
    session.net = read_network(r);
    if (r.u8() != 0) read_session_extras(r, session);
    if (r.pos != r.size)
        throw std::runtime_error("snapshot: trailing bytes in payload");
    return session;
}

Network load_network_snapshot(const std::string& path) {
    return load_snapshot(path).net;
}

std::uint64_t state_hash(const Network& net) {
    std::uint64_t h = kFnvOffset;
    auto mix64 = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= kFnvPrime;
        }
    };
    mix64(net.tick());
    for (std::uint32_t i = 0; i < net.neuron_count(); ++i) {
        const Neuron& n = net.neuron(NeuronId(i));
        mix64(std::bit_cast<std::uint64_t>(n.rate));
        mix64(n.fired ? 1 : 0);
    }
    for (std::uint32_t i = 0; i < net.synapse_count(); ++i) {
        const Synapse& syn = net.synapse(i);
        mix64(std::bit_cast<std::uint64_t>(syn.weight.ltm));
        mix64(std::bit_cast<std::uint64_t>(syn.weight.stm));
        for (std::uint32_t k = 0; k < syn.delay; ++k)
            mix64(std::bit_cast<std::uint64_t>(syn.buf[(syn.head + k) % syn.delay]));
    }
    return h;
}

} // namespace sandnet
