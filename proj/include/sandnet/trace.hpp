#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "sandnet/netcore.hpp"

namespace sandnet {

enum class TraceFormat { csv, jsonl };

TraceFormat parse_trace_format(const std::string& text); // "csv" | "jsonl"

// A named per-tick observable: a neuron's rate or a synapse's effective
// weight.
struct Probe {
    enum class Kind { rate, weight };
    Kind kind;
    std::string label;
    NeuronId a;       // the neuron (rate) or presynaptic end (weight)
    NeuronId b;       // postsynaptic end (weight only)
};

// Per-tick rows: tick, fired ids, then one column per probe, in declaration
// order. csv joins fired ids with ';'; jsonl emits one object per line.
// Doubles are printed with round-trip precision in both formats.
class TraceWriter {
public:
    TraceWriter(const std::string& path, TraceFormat format,
                std::vector<Probe> probes);

    void row(const Network& net, const TickReport& report);
    void flush() { out_.flush(); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    TraceFormat format_;
    std::vector<Probe> probes_;
    std::ofstream out_;
};

} // namespace sandnet
