#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sandnet/netcore.hpp"

namespace sandnet {

// IMP a b  : a forces b (strong delayed excitatory link)
// NOT x b  : x suppresses b through an inhibitory intermediate neuron
// FALSE z  : z is held permanently below threshold
struct Rule {
    enum class Kind { imp, not_, false_ };
    Kind kind;
    std::string a; // premise (imp), suppressor (not_), target (false_)
    std::string b; // conclusion (imp), target (not_); empty for false_
};

// Bookkeeping for one inhibitory gate: the intermediate neuron plus its
// edges onto the target. Gates keep one inhibitory edge per excitatory
// input of the target (plus one), so suppression always wins no matter how
// many rules converge there.
struct Gate {
    NeuronId inhibitor;
    NeuronId target;
    std::vector<std::uint32_t> edges;
};

class RuleBase {
public:
    NeuronId atom(Network& net, const std::string& symbol); // registers new
    std::optional<NeuronId> find_atom(const std::string& symbol) const;
    const std::string* symbol_of(NeuronId id) const;
    const std::map<std::string, NeuronId>& atoms() const { return atoms_; }
    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<Gate>& gates() const { return gates_; }
    bool is_atom_neuron(NeuronId id) const { return by_neuron_.count(id.v) != 0; }

private:
    std::map<std::string, NeuronId> atoms_;
    std::map<std::uint32_t, std::string> by_neuron_;
    std::vector<Rule> rules_;
    std::vector<Gate> gates_;

    friend void compile_rule(Network& net, RuleBase& rb, const Rule& rule);
};

// Long-term weight at which one firing premise is guaranteed to drive its
// conclusion past f_thr: any premise rate r >= f_thr yields
// activation(w_rule * r) >= activation(safety * threshold_sigma) > f_thr.
double rule_weight(const Config& cfg);

// Installs the subgraph realizing the rule; new symbols register
// themselves. Contradictory rules coexist and play out dynamically.
void compile_rule(Network& net, RuleBase& rb, const Rule& rule);

// Injects the fact neurons for the whole horizon, simulates, and returns
// every atom whose neuron crossed f_thr. Runs on a private copy of the
// network; the caller's state is untouched.
std::set<std::string> infer(const Network& net, const RuleBase& rb,
                            const std::set<std::string>& facts,
                            std::uint32_t horizon = 0); // 0: config default

// First tick at which `target` fires after a one-tick pulse of `source`,
// probed on a private copy. Empty when it never fires within the horizon.
std::optional<std::uint64_t> first_fire_latency(const Network& net,
                                                const RuleBase& rb,
                                                const std::string& source,
                                                const std::string& target,
                                                std::uint32_t horizon = 0);

struct ShortcutEdge {
    std::string from;
    std::string to;
    std::uint32_t replay; // replay index (1-based) when ltm crossed w_rule
};

// Replays the rule chains from their root premises with plasticity running;
// repeated indirect firings grow and consolidate direct synapses between
// atoms. Reports every pair whose direct link reached rule strength.
std::vector<ShortcutEdge> consolidate_transitive(Network& net, RuleBase& rb,
                                                 std::uint32_t replays);

struct GateCircuit {
    std::vector<std::string> inputs;
    std::string output;
    std::vector<std::string> drivers; // atoms held true in every assignment
};

struct TruthTable {
    std::vector<std::vector<bool>> inputs;
    std::vector<bool> output;
};

// Evaluates the circuit over the given assignments, one cloned-network
// inference episode per row.
TruthTable truth_table(const Network& net, const RuleBase& rb,
                       const GateCircuit& circuit,
                       const std::vector<std::vector<bool>>& assignments);

// One rule per line: `IMP a b`, `NOT x b`, `FALSE z`; `#` starts a comment.
std::vector<Rule> parse_rules(std::istream& in);
std::vector<Rule> parse_rules_file(const std::string& path);

} // namespace sandnet
