#include "sandnet/trace.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace sandnet {

TraceFormat parse_trace_format(const std::string& text) {
    if (text == "csv") return TraceFormat::csv;
    if (text == "jsonl") return TraceFormat::jsonl;
    throw std::invalid_argument("unknown trace format '" + text +
                                "' (expected csv or jsonl)");
}

namespace {

std::string round_trip(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double probe_value(const Network& net, const Probe& p) {
    if (p.kind == Probe::Kind::rate) return net.neuron(p.a).rate;
    std::int64_t idx = net.find_synapse(p.a, p.b);
    if (idx < 0) throw std::out_of_range("trace probe: no synapse " +
                                         std::to_string(p.a.v) + "->" +
                                         std::to_string(p.b.v));
    return net.synapse(static_cast<std::uint32_t>(idx))
        .weight.effective(net.params().w_max);
}

} // namespace

TraceWriter::TraceWriter(const std::string& path, TraceFormat format,
                         std::vector<Probe> probes)
    : path_(path), format_(format), probes_(std::move(probes)), out_(path) {
    if (!out_) throw std::runtime_error("trace: cannot open " + path);
    if (format_ == TraceFormat::csv) {
        out_ << "tick,fired";
        for (const Probe& p : probes_) out_ << ',' << p.label;
        out_ << '\n';
    }
}

void TraceWriter::row(const Network& net, const TickReport& report) {
    if (format_ == TraceFormat::csv) {
        out_ << report.tick << ',';
        for (std::size_t i = 0; i < report.fired.size(); ++i) {
            if (i) out_ << ';';
            out_ << report.fired[i].v;
        }
        for (const Probe& p : probes_) out_ << ',' << round_trip(probe_value(net, p));
        out_ << '\n';
    } else {
        nlohmann::json j;
        j["tick"] = report.tick;
        auto& fired = j["fired"] = nlohmann::json::array();
        for (NeuronId id : report.fired) fired.push_back(id.v);
        for (const Probe& p : probes_) j[p.label] = probe_value(net, p);
        out_ << j.dump() << '\n';
    }
    if (!out_) throw std::runtime_error("trace: write failed for " + path_);
}

} // namespace sandnet
