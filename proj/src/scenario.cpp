#include "sandnet/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sandnet/config.hpp"
#include "sandnet/sequence.hpp"
#include "sandnet/topology.hpp"

namespace sandnet {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line;
    if (auto hash = body.find('#'); hash != std::string::npos) body.erase(hash);
    std::istringstream ss(body);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return tokens;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> items;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty()) items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) items.push_back(cur);
    return items;
}

// key=value arguments anywhere after the directive name.
struct Args {
    std::vector<std::string> positional;
    std::vector<std::pair<std::string, std::string>> keyed;

    explicit Args(const std::vector<std::string>& tokens, std::size_t from = 1) {
        for (std::size_t i = from; i < tokens.size(); ++i) {
            auto eq = tokens[i].find('=');
            if (eq == std::string::npos)
                positional.push_back(tokens[i]);
            else
                keyed.emplace_back(tokens[i].substr(0, eq), tokens[i].substr(eq + 1));
        }
    }
    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : keyed)
            if (k == key) return &v;
        return nullptr;
    }
    std::string require(const std::string& key) const {
        if (const std::string* v = find(key)) return *v;
        throw ScenarioError("missing argument '" + key + "='");
    }
};

double arg_double(const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ScenarioError("bad number '" + v + "'");
}

std::uint32_t arg_u32(const std::string& v) {
    try {
        std::size_t used = 0;
        unsigned long n = std::stoul(v, &used);
        if (used == v.size()) return static_cast<std::uint32_t>(n);
    } catch (const std::exception&) {
    }
    throw ScenarioError("bad integer '" + v + "'");
}

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

bool compare(double lhs, const std::string& op, double rhs) {
    if (op == ">=") return lhs >= rhs;
    if (op == "<=") return lhs <= rhs;
    if (op == ">") return lhs > rhs;
    if (op == "<") return lhs < rhs;
    if (op == "==") return lhs == rhs;
    if (op == "!=") return lhs != rhs;
    throw ScenarioError("bad comparison operator '" + op + "'");
}

std::string join(const std::vector<std::string>& items, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

} // namespace

ScenarioRunner::ScenarioRunner(Config cfg, ScenarioOptions opt)
    : opt_(std::move(opt)) {
    session_.net = Network(cfg);
    history_ = std::make_unique<FiringHistory>(cfg.plasticity.window_w);
}

NeuronId ScenarioRunner::resolve(const std::string& name) const {
    if (auto it = session_.names.find(name); it != session_.names.end())
        return it->second;
    if (session_.lexicon.contains(name)) return session_.lexicon.word(name).neuron;
    if (auto atom = rules_.find_atom(name)) return *atom;
    throw ScenarioError("unknown name '" + name + "'");
}

std::string ScenarioRunner::name_of(NeuronId id) const {
    for (const auto& [name, nid] : session_.names)
        if (nid == id) return name;
    if (const Word* w = session_.lexicon.find_by_neuron(id)) return w->text;
    if (const std::string* sym = rules_.symbol_of(id)) return *sym;
    return "#" + std::to_string(id.v);
}

void ScenarioRunner::step_once() {
    PostActivationHook hook;
    if (wta_on_ && !groups_.empty()) hook = wta_hook(groups_);
    TickReport report = step_network(session_.net, {}, hook);
    if (plasticity_on_) {
        history_->record(report);
        apply_temporal_plasticity(session_.net, *history_);
        apply_cofire(session_.net, report.fired,
                     session_.net.config().plasticity, &cofire_counts_);
        decay_stm(session_.net, session_.net.config().plasticity);
    }
    if (tracer_) tracer_->row(session_.net, report);
}

void ScenarioRunner::do_assert(const std::vector<std::string>& tokens) {
    if (tokens.size() < 2) throw ScenarioError("assert: missing kind");
    const std::string& kind = tokens[1];
    Network& net = session_.net;
    auto fail = [this](const std::string& what) {
        failures_.push_back(what);
    };

    if (kind == "fired" || kind == "not_fired") {
        if (tokens.size() != 3) throw ScenarioError("assert " + kind + ": need a name");
        bool fired = net.neuron(resolve(tokens[2])).fired;
        bool want = kind == "fired";
        if (fired != want)
            fail("assert " + kind + " " + tokens[2] + ": neuron " +
                 (fired ? "fired" : "did not fire"));
        return;
    }
    if (kind == "rate") {
        if (tokens.size() != 5) throw ScenarioError("assert rate: need name op value");
        double rate = net.neuron(resolve(tokens[2])).rate;
        if (!compare(rate, tokens[3], arg_double(tokens[4])))
            fail("assert rate " + tokens[2] + " " + tokens[3] + " " + tokens[4] +
                 ": actual " + fmt(rate));
        return;
    }
    if (kind == "weight") {
        if (tokens.size() != 6)
            throw ScenarioError("assert weight: need pre post op value");
        std::int64_t idx = net.find_synapse(resolve(tokens[2]), resolve(tokens[3]));
        double w = idx < 0 ? 0.0
                           : net.synapse(static_cast<std::uint32_t>(idx))
                                 .weight.effective(net.params().w_max);
        if (!compare(w, tokens[4], arg_double(tokens[5])))
            fail("assert weight " + tokens[2] + " " + tokens[3] + " " + tokens[4] +
                 " " + tokens[5] + ": actual " + fmt(w));
        return;
    }
    if (kind == "sentence") {
        std::vector<std::string> want(tokens.begin() + 2, tokens.end());
        if (want != last_sentence_)
            fail("assert sentence '" + join(want) + "': actual '" +
                 join(last_sentence_) + "'");
        return;
    }
    if (kind == "derived") {
        std::set<std::string> want(tokens.begin() + 2, tokens.end());
        if (want != last_derived_) {
            std::vector<std::string> have(last_derived_.begin(), last_derived_.end());
            fail("assert derived '" + join({tokens.begin() + 2, tokens.end()}) +
                 "': actual '" + join(have) + "'");
        }
        return;
    }
    if (kind == "recall") {
        std::vector<std::string> want(tokens.begin() + 2, tokens.end());
        if (want != last_recall_)
            fail("assert recall '" + join(want) + "': actual '" +
                 join(last_recall_) + "'");
        return;
    }
    throw ScenarioError("unknown assert kind '" + kind + "'");
}

std::vector<std::string> ScenarioRunner::execute(const std::string& line) {
    std::vector<std::string> tokens = tokenize(line);
    std::vector<std::string> out;
    if (tokens.empty()) return out;
    const std::string& op = tokens[0];
    Network& net = session_.net;

    if (op == "config") {
        Args args(tokens);
        for (const auto& [k, v] : args.keyed) apply_config_entry(net.config(), k, v);
        validate(net.config().net);
        validate(net.config().plasticity);
        return out;
    }
    if (op == "seed") {
        if (tokens.size() != 2) throw ScenarioError("seed: need a value");
        apply_config_entry(net.config(), "seed", tokens[1]);
        return out;
    }
    if (op == "neuron") {
        if (tokens.size() < 2 || tokens.size() > 3)
            throw ScenarioError("neuron: usage `neuron <name> [inhibitory]`");
        if (session_.names.count(tokens[1]))
            throw ScenarioError("neuron: duplicate name '" + tokens[1] + "'");
        NeuronKind kind = NeuronKind::excitatory;
        if (tokens.size() == 3) {
            if (tokens[2] != "inhibitory")
                throw ScenarioError("neuron: unknown modifier '" + tokens[2] + "'");
            kind = NeuronKind::inhibitory;
        }
        session_.names.emplace(tokens[1], net.add_neuron(kind));
        return out;
    }
    if (op == "synapse") {
        if (tokens.size() != 5)
            throw ScenarioError("synapse: usage `synapse <pre> <post> <ltm> <delay>`");
        net.add_synapse(resolve(tokens[1]), resolve(tokens[2]),
                        arg_double(tokens[3]), arg_u32(tokens[4]));
        return out;
    }
    if (op == "word") {
        if (tokens.size() != 2) throw ScenarioError("word: usage `word <text>`");
        add_word(net, session_.lexicon, tokens[1]);
        return out;
    }
    if (op == "ground") {
        if (tokens.size() < 4)
            throw ScenarioError("ground: usage `ground <word> <weight> <feature...>`");
        std::vector<NeuronId> features;
        for (std::size_t i = 3; i < tokens.size(); ++i)
            features.push_back(resolve(tokens[i]));
        ground_word(net, session_.lexicon, session_.lexicon.word(tokens[1]),
                    features, arg_double(tokens[2]));
        return out;
    }
    if (op == "inject") {
        if (tokens.size() != 4)
            throw ScenarioError("inject: usage `inject <name> <strength> <duration>`");
        net.schedule_injection(resolve(tokens[1]), arg_double(tokens[2]),
                               arg_u32(tokens[3]));
        return out;
    }
    if (op == "step") {
        if (tokens.size() != 2) throw ScenarioError("step: usage `step <n>`");
        std::uint32_t n = arg_u32(tokens[1]);
        for (std::uint32_t i = 0; i < n; ++i) step_once();
        return out;
    }
    if (op == "plasticity" || op == "wta") {
        if (tokens.size() != 2 || (tokens[1] != "on" && tokens[1] != "off"))
            throw ScenarioError(op + ": usage `" + op + " on|off`");
        bool v = tokens[1] == "on";
        if (op == "plasticity") {
            plasticity_on_ = v;
            if (v)
                history_ = std::make_unique<FiringHistory>(
                    net.config().plasticity.window_w);
        } else {
            wta_on_ = v;
        }
        return out;
    }
    if (op == "groups") {
        Args args(tokens);
        std::uint32_t threshold = net.config().competition.overlap_threshold;
        if (const std::string* t = args.find("threshold")) threshold = arg_u32(*t);
        groups_ = build_groups(net, threshold);
        std::string desc = "groups:";
        for (const InhibitionGroup& g : groups_) {
            desc += " {";
            for (std::size_t i = 0; i < g.members.size(); ++i) {
                if (i) desc += ",";
                desc += name_of(g.members[i]);
            }
            desc += "}";
        }
        out.push_back(desc);
        return out;
    }
    if (op == "train_sequence") {
        Args args(tokens);
        SequenceSpec spec;
        for (const std::string& item : split_list(args.require("items")))
            spec.items.push_back(resolve(item));
        spec.gap = args.find("gap") ? arg_u32(*args.find("gap")) : 2;
        spec.repetitions = args.find("reps") ? arg_u32(*args.find("reps")) : 20;
        spec.strength = args.find("strength") ? arg_double(*args.find("strength"))
                                              : net.config().sequence.train_strength;
        train_sequence(net, spec);
        return out;
    }
    if (op == "recall") {
        Args args(tokens);
        NeuronId cue = resolve(args.require("cue"));
        std::uint32_t max_len =
            args.find("max_len") ? arg_u32(*args.find("max_len")) : 8;
        std::vector<NeuronId> order = recall_sequence(net, cue, max_len);
        last_recall_.clear();
        for (NeuronId id : order) last_recall_.push_back(name_of(id));
        out.push_back("recall: " + join(last_recall_));
        return out;
    }
    if (op == "encode_object") {
        Args args(tokens);
        std::vector<NeuronId> views, order;
        for (const std::string& v : split_list(args.require("views")))
            views.push_back(resolve(v));
        for (const std::string& v : split_list(args.require("order")))
            order.push_back(resolve(v));
        ObjectCircuit circuit = encode_object(net, views, order);
        out.push_back("anchor: " + name_of(circuit.anchor));
        return out;
    }
    if (op == "recognize") {
        Args args(tokens);
        std::vector<NeuronId> clues, pool;
        for (const std::string& c : split_list(args.require("clues")))
            clues.push_back(resolve(c));
        for (const std::string& p : split_list(args.require("pool")))
            pool.push_back(resolve(p));
        RecognitionResult r = recognize(net, clues, pool);
        out.push_back("recognized: " + name_of(r.winner) +
                      (r.mode == RetrievalMode::association ? " (association)"
                                                            : " (recognition)"));
        return out;
    }
    if (op == "learn_sentence") {
        Args args(tokens);
        std::vector<std::string> words = split_list(args.require("words"));
        std::uint32_t reps = args.find("reps") ? arg_u32(*args.find("reps")) : 0;
        SentencePattern pattern = learn_sentence(net, session_.lexicon, words, reps);
        session_.patterns.push_back(pattern);
        std::string desc =
            "pattern " + std::to_string(session_.patterns.size() - 1) + ":";
        for (const SlotPosition& pos : pattern.slots) {
            if (!pos.open) {
                desc += " " + pos.word.text;
            } else {
                desc += " [";
                for (std::size_t i = 0; i < pos.pool.size(); ++i) {
                    if (i) desc += "|";
                    desc += pos.pool[i].text;
                }
                desc += "]";
            }
        }
        out.push_back(desc);
        return out;
    }
    if (op == "generate") {
        Args args(tokens);
        if (session_.patterns.empty())
            throw ScenarioError("generate: no pattern learned yet");
        std::size_t idx = session_.patterns.size() - 1;
        if (const std::string* p = args.find("pattern")) idx = arg_u32(*p);
        if (idx >= session_.patterns.size())
            throw ScenarioError("generate: no such pattern");
        std::vector<NeuronId> context;
        if (const std::string* ctx = args.find("context"))
            for (const std::string& f : split_list(*ctx))
                context.push_back(resolve(f));
        last_sentence_ = generate_sentence(net, session_.patterns[idx], context);
        out.push_back("sentence: " + join(last_sentence_));
        return out;
    }
    if (op == "rule") {
        if (tokens.size() < 3) throw ScenarioError("rule: usage `rule IMP|NOT|FALSE ...`");
        Rule rule;
        if (tokens[1] == "IMP" && tokens.size() == 4)
            rule = {Rule::Kind::imp, tokens[2], tokens[3]};
        else if (tokens[1] == "NOT" && tokens.size() == 4)
            rule = {Rule::Kind::not_, tokens[2], tokens[3]};
        else if (tokens[1] == "FALSE" && tokens.size() == 3)
            rule = {Rule::Kind::false_, tokens[2], ""};
        else
            throw ScenarioError("rule: bad arity for '" + tokens[1] + "'");
        compile_rule(net, rules_, rule);
        return out;
    }
    if (op == "rules_file") {
        if (tokens.size() != 2) throw ScenarioError("rules_file: need a path");
        std::vector<Rule> parsed = parse_rules_file(tokens[1]);
        for (const Rule& r : parsed) compile_rule(net, rules_, r);
        out.push_back("compiled " + std::to_string(parsed.size()) + " rules");
        return out;
    }
    if (op == "infer") {
        Args args(tokens);
        std::set<std::string> facts;
        if (const std::string* f = args.find("facts"))
            for (const std::string& atom : split_list(*f)) facts.insert(atom);
        std::uint32_t horizon =
            args.find("horizon") ? arg_u32(*args.find("horizon")) : 0;
        last_derived_ = infer(net, rules_, facts, horizon);
        std::vector<std::string> atoms(last_derived_.begin(), last_derived_.end());
        out.push_back("derived: " + join(atoms));
        return out;
    }
    if (op == "consolidate") {
        Args args(tokens);
        double rate = args.find("rate") ? arg_double(*args.find("rate"))
                                        : net.config().plasticity.consolidate_rate;
        consolidate(net, rate);
        return out;
    }
    if (op == "consolidate_transitive") {
        Args args(tokens);
        std::uint32_t replays = arg_u32(args.require("replays"));
        for (const ShortcutEdge& e : consolidate_transitive(net, rules_, replays))
            out.push_back("shortcut: " + e.from + " -> " + e.to + " (replay " +
                          std::to_string(e.replay) + ")");
        return out;
    }
    if (op == "probe") {
        if (tokens.size() == 3 && tokens[1] == "rate") {
            probes_.push_back({Probe::Kind::rate, "rate." + tokens[2],
                               resolve(tokens[2]), NeuronId{}});
            return out;
        }
        if (tokens.size() == 4 && tokens[1] == "weight") {
            probes_.push_back({Probe::Kind::weight,
                               "w." + tokens[2] + "." + tokens[3],
                               resolve(tokens[2]), resolve(tokens[3])});
            return out;
        }
        throw ScenarioError("probe: usage `probe rate <name>` or `probe weight <pre> <post>`");
    }
    if (op == "trace") {
        if (tokens.size() != 2) throw ScenarioError("trace: need a path");
        std::string path = tokens[1];
        if (!path.empty() && path.front() != '/')
            path = opt_.out_dir + "/" + path;
        tracer_ = std::make_unique<TraceWriter>(path, opt_.trace_format, probes_);
        return out;
    }
    if (op == "snapshot_save") {
        if (tokens.size() != 2) throw ScenarioError("snapshot_save: need a path");
        save_snapshot(session_, tokens[1]);
        return out;
    }
    if (op == "snapshot_load") {
        if (tokens.size() != 2) throw ScenarioError("snapshot_load: need a path");
        session_ = load_snapshot(tokens[1]);
        groups_.clear();
        history_ = std::make_unique<FiringHistory>(
            session_.net.config().plasticity.window_w);
        tracer_.reset();
        return out;
    }
    if (op == "measure") {
        if (tokens.size() >= 2 && tokens[1] == "distance") {
            if (tokens.size() != 4)
                throw ScenarioError("measure distance: need <from> <to>");
            auto d = logic_distance(net, resolve(tokens[2]), resolve(tokens[3]));
            out.push_back("distance: " + (d ? std::to_string(*d) : "unreachable"));
            return out;
        }
        if (tokens.size() >= 2 && tokens[1] == "influence") {
            if (tokens.size() != 5)
                throw ScenarioError("measure influence: need <source> <strength> <horizon>");
            auto delta = influence_score(net, resolve(tokens[2]),
                                         arg_double(tokens[3]), arg_u32(tokens[4]));
            std::string desc = "influence " + tokens[2] + ":";
            for (std::uint32_t i = 0; i < delta.size(); ++i)
                if (delta[i] > 0.0)
                    desc += " " + name_of(NeuronId(i)) + "=" + fmt(delta[i]);
            out.push_back(desc);
            return out;
        }
        if (tokens.size() >= 2 && tokens[1] == "kernel") {
            Args args(tokens, 2);
            std::vector<NeuronId> inputs, outputs;
            for (const std::string& n : split_list(args.require("inputs")))
                inputs.push_back(resolve(n));
            for (const std::string& n : split_list(args.require("outputs")))
                outputs.push_back(resolve(n));
            auto ranking = find_kernel(net, inputs, outputs);
            std::string desc = "kernel:";
            std::size_t shown = std::min<std::size_t>(ranking.size(), 10);
            for (std::size_t i = 0; i < shown; ++i)
                desc += " " + name_of(ranking[i].first) + "=" +
                        fmt(ranking[i].second, "%.4g");
            out.push_back(desc);
            return out;
        }
        throw ScenarioError("measure: unknown kind");
    }
    if (op == "assert") {
        std::size_t before = failures_.size();
        do_assert(tokens);
        if (failures_.size() > before)
            out.push_back("ASSERT FAILED: " + failures_.back());
        return out;
    }
    if (op == "echo") {
        std::size_t at = line.find("echo") + 4;
        while (at < line.size() && line[at] == ' ') ++at;
        out.push_back(at < line.size() ? line.substr(at) : "");
        return out;
    }
    throw ScenarioError("unknown directive '" + op + "'");
}

int run_scenario_file(const std::string& path, const ScenarioOptions& opt,
                      std::ostream& out) {
    std::ifstream in(path);
    if (!in) {
        out << "error: cannot open scenario file " << path << "\n";
        return 2;
    }

    Config cfg;
    try {
        if (opt.config_path) cfg = load_config_file(*opt.config_path);
        if (opt.seed) cfg.net.rng_seed = *opt.seed;
    } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
        return 2;
    }

    ScenarioRunner runner(cfg, opt);
    std::vector<std::string> summary;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        try {
            for (const std::string& o : runner.execute(line)) {
                out << o << "\n";
                summary.push_back(o);
            }
        } catch (const std::exception& e) {
            out << path << ":" << lineno << ": error: " << e.what() << "\n";
            return 2;
        }
    }

    std::ofstream sum(opt.out_dir + "/summary.txt");
    for (const std::string& s : summary) sum << s << "\n";
    if (runner.failed_asserts() > 0) {
        std::string verdict = "FAILED: " +
                              std::to_string(runner.failed_asserts()) +
                              " assert(s) failed";
        out << verdict << "\n";
        sum << verdict << "\n";
        return 1;
    }
    out << "ok\n";
    sum << "ok\n";
    return 0;
}

int run_repl(std::istream& in, std::ostream& out,
             const std::optional<std::string>& snapshot_path,
             const ScenarioOptions& opt) {
    Config cfg;
    try {
        if (opt.config_path) cfg = load_config_file(*opt.config_path);
        if (opt.seed) cfg.net.rng_seed = *opt.seed;
    } catch (const std::exception& e) {
        out << "error: " << e.what() << "\n";
        return 2;
    }

    ScenarioRunner runner(cfg, opt);
    if (snapshot_path) {
        try {
            runner.execute("snapshot_load " + *snapshot_path);
        } catch (const std::exception& e) {
            out << "error: " << e.what() << "\n";
            return 2;
        }
    }

    std::string line;
    while (std::getline(in, line)) {
        std::string trimmed = line;
        if (auto first = trimmed.find_first_not_of(" \t\r"); first != std::string::npos)
            trimmed = trimmed.substr(first);
        else
            trimmed.clear();
        if (trimmed == "quit" || trimmed == "exit") break;
        try {
            for (const std::string& o : runner.execute(line)) out << o << "\n";
        } catch (const std::exception& e) {
            out << "error: " << e.what() << "\n";
        }
    }
    return runner.failed_asserts() > 0 ? 1 : 0;
}

} // namespace sandnet
