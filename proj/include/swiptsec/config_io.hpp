#pragma once

#include <string>
#include <vector>

#include "swiptsec/scenario.hpp"

// JSON config and run-manifest handling. Configs accept decibel strings
// ("-10 dB", "20 dBm") anywhere a linear power-like quantity is expected;
// manifests always store the fully resolved linear values plus the exact
// command line, so a run can be reproduced without the original config file.

namespace swiptsec {

// "x dB" and "x dBm" both map to 10^(x/10); plain numbers pass through.
double parse_linear(const std::string& text);

ScenarioConfig config_from_json_text(const std::string& text, const std::string& base_dir);
ScenarioConfig load_config(const std::string& path);

// Serializes every field in linear units (covariance matrices included).
std::string config_to_json_text(const ScenarioConfig& cfg);

struct RunManifest {
  std::string version;
  std::vector<std::string> command;  // argv, including the subcommand
  ScenarioConfig config;             // resolved, linear units
};

void save_manifest(const RunManifest& m, const std::string& path);
RunManifest load_manifest(const std::string& path);

}  // namespace swiptsec
