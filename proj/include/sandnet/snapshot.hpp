#pragma once

#include <map>
#include <string>
#include <vector>

#include "sandnet/language.hpp"
#include "sandnet/netcore.hpp"

namespace sandnet {

// Everything a running experiment needs to resume: the network plus the
// word registry, learned patterns, and the scenario's name table.
struct Session {
    Network net;
    Lexicon lexicon;
    std::vector<SentencePattern> patterns;
    std::map<std::string, NeuronId> names;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

// Versioned little-endian binary with a trailing checksum; load(save(x))
// reproduces bit-identical state, including in-flight delay buffers and the
// pending stimulus schedule, so continuation trajectories match exactly.
void save_snapshot(const Session& session, const std::string& path);
Session load_snapshot(const std::string& path);

void save_snapshot(const Network& net, const std::string& path);
Network load_network_snapshot(const std::string& path);

// FNV-1a over the dynamic state (rates, weights, buffers, tick); equal
// hashes mean bit-identical trajectories so far.
std::uint64_t state_hash(const Network& net);

} // namespace sandnet
