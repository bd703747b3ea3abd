#pragma once

#include <map>
#include <string>
#include <vector>

#include "dhjb/probes.hpp"
#include "dhjb/scenario.hpp"

namespace dhjb {

/// Flat key-value view of a scenario file ("section.key = value" lines,
/// '#' comments). Unknown keys are rejected so typos fail loudly.
struct ConfigFile {
    std::map<std::string, std::string> entries;
    bool has(const std::string& key) const { return entries.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_num(const std::string& key, double fallback) const;
    std::vector<double> get_list(const std::string& key) const;
};

ConfigFile parse_config_text(const std::string& text);
ConfigFile load_config(const std::string& path);

/// Assemble and validate a scenario. Rejects r <= 0 outright; every other
/// hypothesis failure is rejected unless numerics.test_mode is set.
Scenario scenario_from_config(const ConfigFile& cfg);

SuiteCounts counts_from_config(const ConfigFile& cfg);
unsigned long long seed_from_config(const ConfigFile& cfg);

/// Initial-state mini-language:
///   const:v | ramp:v0:v1 | bump:center:width:mass | file:path
/// (bump sets eta0 to mass/width, the bump's average height).
HState parse_eta_spec(const std::string& spec, int N, double T);

/// Control mini-language: zero | const:v | steps:v1,v2,...
/// Values are spread evenly over the horizon.
ControlPath parse_control_spec(const std::string& spec, double horizon);

/// The scenario text shipped as configs/calibration.cfg.
std::string builtin_config_text();

} // namespace dhjb
