#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "forage/codec.hpp"
#include "forage/evolution.hpp"
#include "forage/world.hpp"

namespace forage {

struct AblationConfig {
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    double alpha = 0.05;
    double min_rel_drop = 0.2;
    std::array<double, kGroupCount> replacement{}; // all 0.0 by default
    int sample_stride = 50;
};

struct IoConfig {
    std::string out_dir; // empty: resolved by the CLI
    bool plots = true;
};

struct RunConfig {
    ArenaConfig arena;
    ControllerConfig controller;
    EvolutionConfig evolution;
    AblationConfig ablation;
    IoConfig io;

    void validate() const;
};

// Strict parser: unknown keys are rejected with their JSON path, the
// ablation seeds accept either a count or an explicit list, and
// parse(serialize(parse(x))) == parse(x).
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

RunConfig load_config(const std::string& path);
void save_config(const std::string& path, const RunConfig& config);

} // namespace forage
