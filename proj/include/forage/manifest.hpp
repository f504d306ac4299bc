#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace forage {

inline constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::string_view data); // "fnv1a:...."

// Reproducibility record written into every result directory before any
// result file. Deliberately carries no wall-clock fields so reruns are
// byte-identical.
struct ExperimentManifest {
    std::string tool_version = kToolVersion;
    std::string command;
    std::string config_hash;
    std::uint64_t master_seed = 0;
    std::string input_genome_hash; // empty when no genome input
    std::vector<std::string> outputs;
};

std::string manifest_to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const std::string& text);

} // namespace forage
