#pragma once

#include <string>

#include "sandnet/params.hpp"

namespace sandnet {

// Applies one `section.key=value` override (e.g. net.c1=80,
// plasticity.a_plus=0.3). `seed` is shorthand for net.rng_seed. Unknown
// keys or unparseable values throw.
void apply_config_entry(Config& cfg, const std::string& key,
                        const std::string& value);

// key=value per line, '#' comments, blank lines ignored.
Config load_config_file(const std::string& path, Config base = {});

} // namespace sandnet
