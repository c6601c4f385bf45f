#include "sandnet/logic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sandnet/plasticity.hpp"

namespace sandnet {

namespace {

std::uint32_t excitatory_in_count(const Network& net, NeuronId target) {
    std::uint32_t n = 0;
    for (std::uint32_t idx : net.incoming(target))
        if (net.synapse(idx).sign > 0) ++n;
    return n;
}

// Total inhibitory weight a gate needs on its target: enough to cancel all
// n excitatory rule inputs even if they fire at the ceiling c1 while the
// suppressor fires just at threshold. The floor of one covers direct fact
// injection into a target that has no rules at all.
double gate_weight_needed(const Config& cfg, std::uint32_t exc_count) {
    const double w_rule = rule_weight(cfg);
    const double r_inh_min = activation(w_rule * cfg.net.f_thr, cfg.net);
    double drive = static_cast<double>(std::max<std::uint32_t>(1, exc_count)) *
                   w_rule * cfg.net.c1;
    return cfg.logic.inhibition_factor * drive / r_inh_min;
}

void top_up_gate(Network& net, Gate& gate) {
    double needed = gate_weight_needed(net.config(),
                                       excitatory_in_count(net, gate.target));
    double have = 0.0;
    const double w_max = net.params().w_max;
    for (std::uint32_t idx : gate.edges)
        have += net.synapse(idx).weight.effective(w_max);
    while (have < needed) {
        gate.edges.push_back(net.add_synapse(gate.inhibitor, gate.target, w_max, 1));
        have += w_max;
    }
}

} // namespace

NeuronId RuleBase::atom(Network& net, const std::string& symbol) {
    if (symbol.empty()) throw std::invalid_argument("atom: empty symbol");
    auto it = atoms_.find(symbol);
    if (it != atoms_.end()) return it->second;
    NeuronId id = net.add_neuron(NeuronKind::excitatory);
    atoms_.emplace(symbol, id);
    by_neuron_.emplace(id.v, symbol);
    return id;
}

std::optional<NeuronId> RuleBase::find_atom(const std::string& symbol) const {
    auto it = atoms_.find(symbol);
    if (it == atoms_.end()) return std::nullopt;
    return it->second;
}

const std::string* RuleBase::symbol_of(NeuronId id) const {
    auto it = by_neuron_.find(id.v);
    if (it == by_neuron_.end()) return nullptr;
    return &it->second;
}

double rule_weight(const Config& cfg) {
    double w = cfg.logic.safety * threshold_sigma(cfg.net) / cfg.net.f_thr;
    if (w > cfg.net.w_max)
        throw std::invalid_argument(
            "rule_weight: required weight exceeds w_max; raise c2 or w_max");
    return w;
}

void compile_rule(Network& net, RuleBase& rb, const Rule& rule) {
    const double w_rule = rule_weight(net.config());
    const std::uint32_t d_rule = net.config().logic.d_rule;

    switch (rule.kind) {
    case Rule::Kind::imp: {
        NeuronId a = rb.atom(net, rule.a);
        NeuronId b = rb.atom(net, rule.b);
        std::int64_t idx = net.find_synapse(a, b);
        if (idx < 0) {
            net.add_synapse(a, b, w_rule, d_rule);
        } else {
            DualTraceWeight& w = net.synapse(static_cast<std::uint32_t>(idx)).weight;
            w.ltm = std::max(w.ltm, w_rule);
        }
        for (Gate& gate : rb.gates_)
            if (gate.target == b) top_up_gate(net, gate);
        break;
    }
    case Rule::Kind::not_: {
        NeuronId x = rb.atom(net, rule.a);
        NeuronId target = rb.atom(net, rule.b);
        Gate gate;
        gate.inhibitor = net.add_neuron(NeuronKind::inhibitory);
        gate.target = target;
        net.add_synapse(x, gate.inhibitor, w_rule, 1);
        rb.gates_.push_back(gate);
        top_up_gate(net, rb.gates_.back());
        break;
    }
    case Rule::Kind::false_: {
        NeuronId target = rb.atom(net, rule.a);
        Gate gate;
        gate.inhibitor = net.add_neuron(NeuronKind::inhibitory);
        gate.target = target;
        rb.gates_.push_back(gate);
        top_up_gate(net, rb.gates_.back());
        break;
    }
    }
    rb.rules_.push_back(rule);
}

namespace {

// Inhibitors with no presynaptic drive (FALSE gates) are held active by a
// steady bias for the whole episode.
ExternalInput episode_bias(const Network& net, const RuleBase& rb) {
    ExternalInput ext;
    for (const Gate& g : rb.gates())
        if (net.incoming(g.inhibitor).empty())
            ext[g.inhibitor] += net.config().logic.fact_strength;
    return ext;
}

std::uint32_t effective_horizon(const Network& net, std::uint32_t horizon) {
    return horizon == 0 ? net.config().logic.horizon : horizon;
}

} // namespace

std::set<std::string> infer(const Network& net, const RuleBase& rb,
                            const std::set<std::string>& facts,
                            std::uint32_t horizon) {
    Network episode = net;
    const double strength = episode.config().logic.fact_strength;

    const ExternalInput bias = episode_bias(episode, rb);
    ExternalInput ext = bias;
    for (const std::string& f : facts) {
        auto id = rb.find_atom(f);
        if (!id) throw std::out_of_range("infer: unknown atom '" + f + "'");
        ext[*id] += strength;
    }

    // One bias-only tick arms the clamp gates before any fact arrives.
    step_network(episode, bias);

    std::set<std::string> derived;
    const std::uint32_t h = effective_horizon(episode, horizon);
    for (std::uint32_t t = 0; t < h; ++t) {
        TickReport r = step_network(episode, ext);
        for (NeuronId id : r.fired)
            if (const std::string* sym = rb.symbol_of(id)) derived.insert(*sym);
    }
    return derived;
}

std::optional<std::uint64_t> first_fire_latency(const Network& net,
                                                const RuleBase& rb,
                                                const std::string& source,
                                                const std::string& target,
                                                std::uint32_t horizon) {
    auto src = rb.find_atom(source);
    auto tgt = rb.find_atom(target);
    if (!src || !tgt)
        throw std::out_of_range("first_fire_latency: unknown atom");

    Network episode = net;
    const std::uint64_t start = episode.tick();
    const ExternalInput bias = episode_bias(episode, rb);
    step_network(episode, bias); // arm clamp gates
    const std::uint32_t h = effective_horizon(episode, horizon);
    for (std::uint32_t t = 0; t < h; ++t) {
        ExternalInput ext = bias;
        if (t == 0) ext[*src] += episode.config().logic.fact_strength;
        TickReport r = step_network(episode, ext);
        if (std::find(r.fired.begin(), r.fired.end(), *tgt) != r.fired.end())
            return r.tick - start - 1; // ticks since the source pulse
    }
    return std::nullopt;
}

std::vector<ShortcutEdge> consolidate_transitive(Network& net, RuleBase& rb,
                                                 std::uint32_t replays) {
    if (replays < 1)
        throw std::invalid_argument("consolidate_transitive: replays must be >= 1");
    const double w_rule = rule_weight(net.config());
    // Replay association spans one relay: pairs further apart than a single
    // indirect hop only connect after the path itself has contracted, which
    // keeps short shortcuts emerging before long ones.
    PlasticityParams pp = net.config().plasticity;
    pp.window_w = std::min(pp.window_w, 2 * net.config().logic.d_rule);

    // Root premises: atoms that imply something but follow from nothing.
    std::set<std::string> conclusions;
    for (const Rule& r : rb.rules())
        if (r.kind == Rule::Kind::imp) conclusions.insert(r.b);
    std::vector<NeuronId> roots;
    for (const Rule& r : rb.rules())
        if (r.kind == Rule::Kind::imp && !conclusions.count(r.a))
            roots.push_back(*rb.find_atom(r.a));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    if (roots.empty()) return {};

    const std::uint32_t episode_len =
        static_cast<std::uint32_t>(rb.atoms().size()) * net.config().logic.d_rule +
        pp.window_w + 2;
    const ExternalInput bias = episode_bias(net, rb);

    // Synapses already at rule strength never count as new shortcuts.
    std::set<std::pair<std::uint32_t, std::uint32_t>> reported;
    for (std::uint32_t i = 0; i < net.synapse_count(); ++i) {
        const Synapse& s = net.synapse(i);
        if (s.weight.ltm >= w_rule) reported.insert({s.pre.v, s.post.v});
    }

    std::vector<ShortcutEdge> shortcuts;
    FiringHistory history(pp.window_w);
    for (std::uint32_t replay = 1; replay <= replays; ++replay) {
        for (std::uint32_t t = 0; t < episode_len; ++t) {
            ExternalInput ext = bias;
            if (t == 0)
                for (NeuronId r : roots)
                    ext[r] += net.config().logic.fact_strength;
            TickReport report = step_network(net, ext);
            history.record(report);

            // Repeated indirect activation grows the missing direct link
            // (one ordinary conduction delay, not the path's total).
            for (NeuronId post : report.fired) {
                if (!rb.is_atom_neuron(post)) continue;
                for (const auto& [sym, pre] : rb.atoms()) {
                    if (pre == post) continue;
                    const auto& ticks = history.fired_ticks(pre);
                    bool fired_before = false;
                    for (std::uint64_t tp : ticks)
                        if (tp < report.tick) { fired_before = true; break; }
                    if (fired_before && net.find_synapse(pre, post) < 0)
                        net.add_synapse(pre, post, 0.0, net.config().logic.d_rule);
                }
            }
            apply_temporal_plasticity(net, history, pp);
            decay_stm(net, pp);
        }
        consolidate(net, pp.consolidate_rate);

        for (std::uint32_t i = 0; i < net.synapse_count(); ++i) {
            const Synapse& s = net.synapse(i);
            if (s.weight.ltm < w_rule) continue;
            if (!rb.is_atom_neuron(s.pre) || !rb.is_atom_neuron(s.post)) continue;
            if (reported.count({s.pre.v, s.post.v})) continue;
            reported.insert({s.pre.v, s.post.v});
            shortcuts.push_back({*rb.symbol_of(s.pre), *rb.symbol_of(s.post), replay});
        }
    }
    return shortcuts;
}

TruthTable truth_table(const Network& net, const RuleBase& rb,
                       const GateCircuit& circuit,
                       const std::vector<std::vector<bool>>& assignments) {
    for (const std::string& sym : circuit.inputs)
        if (!rb.find_atom(sym))
            throw std::out_of_range("truth_table: unknown input atom '" + sym + "'");
    if (!rb.find_atom(circuit.output))
        throw std::out_of_range("truth_table: unknown output atom");

    TruthTable table;
    for (const std::vector<bool>& row : assignments) {
        if (row.size() != circuit.inputs.size())
            throw std::invalid_argument("truth_table: assignment arity mismatch");
        std::set<std::string> facts(circuit.drivers.begin(), circuit.drivers.end());
        for (std::size_t i = 0; i < row.size(); ++i)
            if (row[i]) facts.insert(circuit.inputs[i]);
        std::set<std::string> derived = infer(net, rb, facts);
        table.inputs.push_back(row);
        table.output.push_back(derived.count(circuit.output) != 0);
    }
    return table;
}

std::vector<Rule> parse_rules(std::istream& in) {
    std::vector<Rule> rules;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        std::string op, a, b, extra;
        if (!(ss >> op)) continue; // blank
        auto fail = [&](const std::string& why) {
            throw std::runtime_error("rule file line " + std::to_string(lineno) +
                                     ": " + why);
        };
        if (op == "IMP") {
            if (!(ss >> a >> b)) fail("IMP needs two atoms");
            if (ss >> extra) fail("trailing tokens");
            rules.push_back({Rule::Kind::imp, a, b});
        } else if (op == "NOT") {
            if (!(ss >> a >> b)) fail("NOT needs two atoms");
            if (ss >> extra) fail("trailing tokens");
            rules.push_back({Rule::Kind::not_, a, b});
        } else if (op == "FALSE") {
            if (!(ss >> a)) fail("FALSE needs one atom");
            if (ss >> extra) fail("trailing tokens");
            rules.push_back({Rule::Kind::false_, a, ""});
        } else {
            fail("unknown operation '" + op + "'");
        }
    }
    return rules;
}

std::vector<Rule> parse_rules_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rule file: " + path);
    return parse_rules(in);
}

} // namespace sandnet
