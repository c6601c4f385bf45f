#pragma once

#include <cstdint>
#include <stdexcept>

namespace sandnet {

// Network-level constants. c1 is the firing-rate ceiling, c2 the slope of
// the saturating activation f = c1*(1 - exp(-c2*sigma)). A neuron counts as
// "fired" on a tick when its rate >= f_thr.
struct NetParams {
    double c1 = 100.0;        // activation ceiling (rate units)
    double c2 = 0.02;         // activation slope (per rate unit)
    double f_thr = 20.0;      // fired threshold (rate units)
    double w_max = 1.0;       // effective weight cap
    double s_max = 0.5;       // short-term trace cap
    std::uint64_t rng_seed = 0;
};

// Constants for the two learning rules: co-firing association and the
// temporally asymmetric kernel (potentiation forward, depression backward,
// both shrinking with the firing interval).
struct PlasticityParams {
    double a_plus = 0.25;     // potentiation amplitude
    double a_minus = 0.08;    // depression amplitude
    double tau_plus = 5.0;    // potentiation time constant (ticks)
    double tau_minus = 5.0;   // depression time constant (ticks)
    double eta_cofire = 0.05; // co-firing learning rate
    double tau_stm = 50.0;    // short-term trace decay constant (ticks)
    double consolidate_rate = 1.0; // fraction of stm moved to ltm per event
    std::uint32_t window_w = 10;   // max |dt| considered (ticks)
    bool grow_new = false;         // allocate shared targets for co-firing pairs
    std::uint32_t grow_threshold = 3;
    double grow_init_weight = 0.1;
};

struct CompetitionParams {
    std::uint32_t overlap_threshold = 1; // shared input sources for grouping
    bool hard_wta = true;     // losers zeroed; false = subtractive inhibition
    double inhibition_strength = 5.0; // per-rival penalty in soft mode
    bool fanin_mode = false;  // winner by anatomical fan-in instead of sigma
    double group_min_weight = 0.05; // synapses below this do not count as inputs
};

struct SequenceParams {
    double train_strength = 40.0;  // injection rate during training
    double recall_strength = 40.0; // cue injection rate
    std::uint32_t rest = 11;       // quiet ticks between repetitions
    double object_strength = 40.0; // view injection during object encoding
    std::uint32_t object_gap = 1;  // ticks between successive views
    std::uint32_t object_reps = 8; // passes over the presentation order
    double recognize_strength = 35.0;
    std::uint32_t assoc_cutoff = 3; // clues below this count -> "association"
};

struct LanguageParams {
    double ground_weight = 0.35;   // feature->word synapse weight
    double context_strength = 35.0; // feature injection during generation
    double generate_strength = 40.0; // frame word injection
    double slot_priming = 0.10;    // chain weight into an open slot
    std::uint32_t gap = 2;         // ticks between word onsets
    std::uint32_t learn_reps = 20;
};

struct LogicParams {
    std::uint32_t d_rule = 2;      // implication conduction delay (ticks)
    double safety = 1.2;           // margin on the rule-weight inversion
    double inhibition_factor = 2.0; // gate strength over excitatory drive
    double fact_strength = 45.0;   // fact injection rate
    std::uint32_t horizon = 40;    // default inference window (ticks)
};

// Full parameter set carried by a Network. Individual modules read only
// their own block; the harness config file can override any field.
struct Config {
    NetParams net;
    PlasticityParams plasticity;
    CompetitionParams competition;
    SequenceParams sequence;
    LanguageParams language;
    LogicParams logic;
};

inline void validate(const NetParams& p) {
    if (!(p.c1 > 0.0) || !(p.c2 > 0.0))
        throw std::invalid_argument("NetParams: c1 and c2 must be positive");
    if (!(p.f_thr > 0.0) || !(p.f_thr < p.c1))
        throw std::invalid_argument("NetParams: need 0 < f_thr < c1");
    if (!(p.w_max > 0.0) || p.s_max < 0.0)
        throw std::invalid_argument("NetParams: need w_max > 0 and s_max >= 0");
}

inline void validate(const PlasticityParams& p) {
    if (p.a_plus < 0.0 || p.a_minus < 0.0 || !(p.tau_plus > 0.0) ||
        !(p.tau_minus > 0.0) || !(p.tau_stm > 0.0))
        throw std::invalid_argument("PlasticityParams: constants must be positive");
    if (static_cast<double>(p.window_w) < p.tau_plus ||
        static_cast<double>(p.window_w) < p.tau_minus)
        throw std::invalid_argument("PlasticityParams: window_w must cover both kernels");
}

} // namespace sandnet
