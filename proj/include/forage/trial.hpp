#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "forage/codec.hpp"
#include "forage/world.hpp"

namespace forage {

// Cumulative resources delivered to the nest, sampled on a fixed stride.
struct EfficiencyCurve {
    std::uint64_t trial_seed = 0;
    std::vector<std::pair<long, long>> samples; // (tick, cumulative delivered)
    long final_count = 0;
    long final_picked = 0; // pickup tally at trial end, used for fitness
};

struct TrialContext {
    ArenaConfig arena;
    ControllerConfig controller;
    Distribution distribution = Distribution::Uniform;
    int sample_stride = 50;
};

// World construction is a function of (seed, context) only -- never of
// the ablation mask -- so masked variants run against identical
// environments (seed pairing).
WorldState make_trial_world(std::uint64_t seed, const TrialContext& ctx);

EfficiencyCurve run_trial(const Network& net, const AblationMask& mask,
                          std::uint64_t seed, const TrialContext& ctx);
EfficiencyCurve run_trial(const Genome& genome, const AblationMask& mask,
                          std::uint64_t seed, const TrialContext& ctx);

struct TraceRow {
    long tick = 0;
    double x = 0.0, y = 0.0, theta = 0.0;
    bool holding = false;
    long delivered = 0;
    bool laid_pheromone = false;
};

struct ReplayResult {
    std::vector<TraceRow> rows; // trial_ticks + 1 rows including the initial state
    WorldState final_world;
};

// Per-tick trace of robot 0 plus the end-of-trial world snapshot.
ReplayResult replay_trial(const Genome& genome, const AblationMask& mask,
                          std::uint64_t seed, const TrialContext& ctx);

// Seam between the experiment machinery and what it measures: the
// ablation sweep, significance checks and minimal-set search only need
// (mask, seed) -> curve. The real runner wraps a compiled genome; the
// mock runner backs the search oracle tests.
using TrialFn =
    std::function<EfficiencyCurve(const AblationMask& mask, std::uint64_t seed)>;

// Throws if the genome does not expose the 15-input / 3-output interface.
TrialFn make_trial_runner(const Genome& genome, const TrialContext& ctx);

// Synthetic controller: final deliveries = 10 * |{HoldingFood, NestLight}
// intersect enabled groups|, independent of seed.
TrialFn make_mock_runner();

} // namespace forage
