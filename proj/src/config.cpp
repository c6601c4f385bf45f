#include "sandnet/config.hpp"

#include <fstream>
#include <stdexcept>

namespace sandnet {

namespace {

double to_double(const std::string& v) {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("bad number '" + v + "'");
    return d;
}

std::uint32_t to_u32(const std::string& v) {
    std::size_t used = 0;
    unsigned long n = std::stoul(v, &used);
    if (used != v.size()) throw std::invalid_argument("bad integer '" + v + "'");
    return static_cast<std::uint32_t>(n);
}

std::uint64_t to_u64(const std::string& v) {
    std::size_t used = 0;
    unsigned long long n = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("bad integer '" + v + "'");
    return n;
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw std::invalid_argument("bad boolean '" + v + "'");
}

} // namespace

void apply_config_entry(Config& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "seed" || key == "net.rng_seed") { cfg.net.rng_seed = to_u64(value); return; }
    if (key == "net.c1") { cfg.net.c1 = to_double(value); return; }
    if (key == "net.c2") { cfg.net.c2 = to_double(value); return; }
    if (key == "net.f_thr") { cfg.net.f_thr = to_double(value); return; }
    if (key == "net.w_max") { cfg.net.w_max = to_double(value); return; }
    if (key == "net.s_max") { cfg.net.s_max = to_double(value); return; }

    if (key == "plasticity.a_plus") { cfg.plasticity.a_plus = to_double(value); return; }
    if (key == "plasticity.a_minus") { cfg.plasticity.a_minus = to_double(value); return; }
    if (key == "plasticity.tau_plus") { cfg.plasticity.tau_plus = to_double(value); return; }
    if (key == "plasticity.tau_minus") { cfg.plasticity.tau_minus = to_double(value); return; }
    if (key == "plasticity.eta_cofire") { cfg.plasticity.eta_cofire = to_double(value); return; }
    if (key == "plasticity.tau_stm") { cfg.plasticity.tau_stm = to_double(value); return; }
    if (key == "plasticity.consolidate_rate") { cfg.plasticity.consolidate_rate = to_double(value); return; }
    if (key == "plasticity.window_w") { cfg.plasticity.window_w = to_u32(value); return; }
    if (key == "plasticity.grow_new") { cfg.plasticity.grow_new = to_bool(value); return; }
    if (key == "plasticity.grow_threshold") { cfg.plasticity.grow_threshold = to_u32(value); return; }
    if (key == "plasticity.grow_init_weight") { cfg.plasticity.grow_init_weight = to_double(value); return; }

    if (key == "competition.overlap_threshold") { cfg.competition.overlap_threshold = to_u32(value); return; }
    if (key == "competition.hard_wta") { cfg.competition.hard_wta = to_bool(value); return; }
    if (key == "competition.inhibition_strength") { cfg.competition.inhibition_strength = to_double(value); return; }
    if (key == "competition.fanin_mode") { cfg.competition.fanin_mode = to_bool(value); return; }
    if (key == "competition.group_min_weight") { cfg.competition.group_min_weight = to_double(value); return; }

    if (key == "sequence.train_strength") { cfg.sequence.train_strength = to_double(value); return; }
    if (key == "sequence.recall_strength") { cfg.sequence.recall_strength = to_double(value); return; }
    if (key == "sequence.rest") { cfg.sequence.rest = to_u32(value); return; }
    if (key == "sequence.object_strength") { cfg.sequence.object_strength = to_double(value); return; }
    if (key == "sequence.object_gap") { cfg.sequence.object_gap = to_u32(value); return; }
    if (key == "sequence.object_reps") { cfg.sequence.object_reps = to_u32(value); return; }
    if (key == "sequence.recognize_strength") { cfg.sequence.recognize_strength = to_double(value); return; }
    if (key == "sequence.assoc_cutoff") { cfg.sequence.assoc_cutoff = to_u32(value); return; }

    if (key == "language.ground_weight") { cfg.language.ground_weight = to_double(value); return; }
    if (key == "language.context_strength") { cfg.language.context_strength = to_double(value); return; }
    if (key == "language.generate_strength") { cfg.language.generate_strength = to_double(value); return; }
    if (key == "language.slot_priming") { cfg.language.slot_priming = to_double(value); return; }
    if (key == "language.gap") { cfg.language.gap = to_u32(value); return; }
    if (key == "language.learn_reps") { cfg.language.learn_reps = to_u32(value); return; }

    if (key == "logic.d_rule") { cfg.logic.d_rule = to_u32(value); return; }
    if (key == "logic.safety") { cfg.logic.safety = to_double(value); return; }
    if (key == "logic.inhibition_factor") { cfg.logic.inhibition_factor = to_double(value); return; }
    if (key == "logic.fact_strength") { cfg.logic.fact_strength = to_double(value); return; }
    if (key == "logic.horizon") { cfg.logic.horizon = to_u32(value); return; }

    throw std::invalid_argument("unknown config key '" + key + "'");
}

Config load_config_file(const std::string& path, Config base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        try {
            apply_config_entry(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    validate(base.net);
    validate(base.plasticity);
    return base;
}

} // namespace sandnet
