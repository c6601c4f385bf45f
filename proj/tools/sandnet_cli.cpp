// Command-line front end: scenario runner, interactive loop, snapshot
// utilities, rule-file inference, and sandglass topology reports.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sandnet/config.hpp"
#include "sandnet/logic.hpp"
#include "sandnet/scenario.hpp"
#include "sandnet/snapshot.hpp"
#include "sandnet/topology.hpp"

namespace {

using namespace sandnet;

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> config_path;
    std::string trace_format = "csv";
    std::string out_dir = ".";

    ScenarioOptions options() const {
        ScenarioOptions opt;
        opt.out_dir = out_dir;
        opt.trace_format = parse_trace_format(trace_format);
        opt.seed = seed;
        opt.config_path = config_path;
        return opt;
    }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "RNG seed override");
    cmd->add_option("--config", flags.config_path, "key=value config file");
    cmd->add_option("--trace-format", flags.trace_format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--out-dir", flags.out_dir, "directory for traces and summary");
}

Config flags_config(const CommonFlags& flags) {
    Config cfg;
    if (flags.config_path) cfg = load_config_file(*flags.config_path);
    if (flags.seed) cfg.net.rng_seed = *flags.seed;
    return cfg;
}

// Long fibers across areas, added verbatim on top of the layered wiring.
struct Expressway {
    std::uint32_t from, to;
    double weight;
    std::uint32_t delay;
};

struct TopoFile {
    SandglassSpec spec;
    std::vector<Expressway> expressways;
};

TopoFile parse_topo_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topology spec: " + path);
    TopoFile file;
    SandglassSpec& spec = file.spec;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string entry;
        if (!(ss >> entry)) continue;
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        std::string key = entry.substr(0, eq), value = entry.substr(eq + 1);
        auto csv = [&value] {
            std::vector<std::string> items;
            std::istringstream ls(value);
            std::string item;
            while (std::getline(ls, item, ',')) items.push_back(item);
            return items;
        };
        if (key == "layers") {
            spec.layer_sizes.clear();
            for (const std::string& item : csv())
                spec.layer_sizes.push_back(static_cast<std::uint32_t>(std::stoul(item)));
        } else if (key == "fan_in") {
            spec.fan_in = static_cast<std::uint32_t>(std::stoul(value));
        } else if (key == "delay") {
            spec.delay = static_cast<std::uint32_t>(std::stoul(value));
        } else if (key == "weight") {
            spec.weight = std::stod(value);
        } else if (key == "seed") {
            spec.seed = std::stoull(value);
        } else if (key == "expressway") {
            std::vector<std::string> parts = csv();
            if (parts.size() < 2 || parts.size() > 4)
                throw std::runtime_error(
                    path + ":" + std::to_string(lineno) +
                    ": expressway=<from>,<to>[,<weight>[,<delay>]]");
            Expressway e;
            e.from = static_cast<std::uint32_t>(std::stoul(parts[0]));
            e.to = static_cast<std::uint32_t>(std::stoul(parts[1]));
            e.weight = parts.size() > 2 ? std::stod(parts[2]) : spec.weight;
            e.delay = parts.size() > 3
                          ? static_cast<std::uint32_t>(std::stoul(parts[3]))
                          : spec.delay;
            file.expressways.push_back(e);
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
        }
    }
    return file;
}

int cmd_rules(const std::string& rulefile, const std::string& facts_csv,
              std::uint32_t horizon, const CommonFlags& flags) {
    Network net(flags_config(flags));
    RuleBase rb;
    for (const Rule& r : parse_rules_file(rulefile)) compile_rule(net, rb, r);

    std::set<std::string> facts;
    std::string item;
    std::istringstream fs(facts_csv);
    while (std::getline(fs, item, ','))
        if (!item.empty()) facts.insert(item);

    std::set<std::string> derived = infer(net, rb, facts, horizon);
    std::cout << "derived:";
    for (const std::string& atom : derived) std::cout << " " << atom;
    std::cout << "\n";
    return 0;
}

int cmd_topo(const std::string& specfile, const CommonFlags& flags) {
    TopoFile file = parse_topo_file(specfile);
    const SandglassSpec& spec = file.spec;
    Network net = build_sandglass(spec, flags_config(flags));
    for (const Expressway& e : file.expressways)
        net.add_synapse(NeuronId(e.from), NeuronId(e.to), e.weight, e.delay);
    auto layers = sandglass_layers(spec);

    std::cout << "neurons: " << net.neuron_count()
              << "  synapses: " << net.synapse_count() << "\n";
    std::vector<NeuronId> inputs = layers.front(), outputs = layers.back();
    auto ranking = find_kernel(net, inputs, outputs);
    std::cout << "kernel ranking (top 10):\n";
    for (std::size_t i = 0; i < std::min<std::size_t>(10, ranking.size()); ++i)
        std::cout << "  " << ranking[i].first.v << "  score "
                  << ranking[i].second << "\n";

    auto reports = measure_positions(net, inputs, outputs, 40.0, 30);
    std::cout << "positions (id, distance, reach, influence, autonomy):\n";
    for (const PositionReport& r : reports) {
        std::cout << "  " << r.neuron.v << "  "
                  << (r.distance_from_inputs
                          ? std::to_string(*r.distance_from_inputs)
                          : std::string("inf"))
                  << "  " << r.reach << "  " << r.influence << "  " << r.autonomy
                  << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sandnet: deterministic rate-coded self-organizing network simulator"};
    app.require_subcommand(1);

    CommonFlags sim_flags;
    std::string scenario_path;
    auto* sim = app.add_subcommand("simulate", "run a scenario file");
    sim->add_option("scenario", scenario_path, "scenario file")->required();
    add_common(sim, sim_flags);

    CommonFlags repl_flags;
    std::optional<std::string> repl_snapshot;
    auto* repl = app.add_subcommand("repl", "interactive session");
    repl->add_option("snapshot", repl_snapshot, "session snapshot to load");
    add_common(repl, repl_flags);

    CommonFlags snap_flags;
    std::string snap_mode, snap_a, snap_b;
    auto* snap = app.add_subcommand("snapshot", "save/load session snapshots");
    snap->add_option("mode", snap_mode, "save or load")->required()
        ->check(CLI::IsMember({"save", "load"}));
    snap->add_option("arg1", snap_a, "save: scenario file; load: snapshot file")
        ->required();
    snap->add_option("arg2", snap_b, "save: output snapshot path");
    add_common(snap, snap_flags);

    CommonFlags rules_flags;
    std::string rules_path, facts_csv;
    std::uint32_t horizon = 0;
    auto* rules = app.add_subcommand("rules", "compile a rule file and infer");
    rules->add_option("rulefile", rules_path, "rule file")->required();
    rules->add_option("--facts", facts_csv, "comma-separated fact atoms");
    rules->add_option("--horizon", horizon, "inference window (ticks)");
    add_common(rules, rules_flags);

    CommonFlags topo_flags;
    std::string topo_path;
    auto* topo = app.add_subcommand("topo", "build a sandglass and report positions");
    topo->add_option("specfile", topo_path, "topology spec file")->required();
    add_common(topo, topo_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2, help exits 0
    }

    try {
        if (sim->parsed())
            return run_scenario_file(scenario_path, sim_flags.options(), std::cout);
        if (repl->parsed())
            return run_repl(std::cin, std::cout, repl_snapshot, repl_flags.options());
        if (snap->parsed()) {
            if (snap_mode == "save") {
                if (snap_b.empty()) {
                    std::cerr << "snapshot save: need <scenario> <out>\n";
                    return 2;
                }
                ScenarioOptions opt = snap_flags.options();
                Config cfg = flags_config(snap_flags);
                ScenarioRunner runner(cfg, opt);
                std::ifstream in(snap_a);
                if (!in) {
                    std::cerr << "cannot open scenario " << snap_a << "\n";
                    return 2;
                }
                std::string line;
                while (std::getline(in, line))
                    for (const std::string& o : runner.execute(line))
                        std::cout << o << "\n";
                save_snapshot(runner.session(), snap_b);
                std::cout << "saved " << snap_b << "\n";
                return runner.failed_asserts() > 0 ? 1 : 0;
            }
            Session s = load_snapshot(snap_a);
            std::cout << "snapshot ok: tick " << s.net.tick() << ", "
                      << s.net.neuron_count() << " neurons, "
                      << s.net.synapse_count() << " synapses, "
                      << s.lexicon.size() << " words, " << s.patterns.size()
                      << " patterns\n";
            return 0;
        }
        if (rules->parsed())
            return cmd_rules(rules_path, facts_csv, horizon, rules_flags);
        if (topo->parsed()) return cmd_topo(topo_path, topo_flags);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
