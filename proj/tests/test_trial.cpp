#include <vector>

#include <stdexcept>

#include "doctest.h"

#include "forage/evolution.hpp"
#include "forage/trial.hpp"
#include "forage/world.hpp"
#include "support/helpers.hpp"

using namespace forage;

namespace {

Genome wandering_genome() {
    Rng rng(31);
    InnovationLedger ledger;
    return make_seed_genome(ledger, rng);
}

} // namespace

TEST_CASE("identical (mask, seed) trials produce identical curves") {
    TrialContext ctx = testsupport::small_context();
    Genome g = wandering_genome();
    EfficiencyCurve a = run_trial(g, AblationMask::all_enabled(), 9, ctx);
    EfficiencyCurve b = run_trial(g, AblationMask::all_enabled(), 9, ctx);
    CHECK(a.samples == b.samples);
    CHECK(a.final_count == b.final_count);
    CHECK(a.final_picked == b.final_picked);
}

TEST_CASE("world construction never depends on the mask") {
    TrialContext ctx = testsupport::small_context();
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const std::string reference = world_to_json(make_trial_world(seed, ctx));
        // exercise a few masked runs in between; the layout must not move
        Genome g = wandering_genome();
        AblationMask m1;
        m1.disable(ChannelGroup::NestLight, 1.0);
        run_trial(g, m1, seed, ctx);
        CHECK(world_to_json(make_trial_world(seed, ctx)) == reference);
    }
}

TEST_CASE("zero-signal masking identity: robot proximity in a single-robot world") {
    TrialContext ctx = testsupport::small_context();
    Genome g = wandering_genome();
    AblationMask masked;
    masked.disable(ChannelGroup::RobotProximity, 0.0);
    for (std::uint64_t seed : {4ULL, 5ULL}) {
        EfficiencyCurve base = run_trial(g, AblationMask::all_enabled(), seed, ctx);
        EfficiencyCurve variant = run_trial(g, masked, seed, ctx);
        CHECK(base.samples == variant.samples);
        CHECK(base.final_count == variant.final_count);
    }
}

TEST_CASE("efficiency curves are monotone and end at the final count") {
    TrialContext ctx = testsupport::small_context();
    Genome g = wandering_genome();
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        EfficiencyCurve c = run_trial(g, AblationMask::all_enabled(), seed, ctx);
        REQUIRE_FALSE(c.samples.empty());
        CHECK(c.samples.front().first == 0);
        CHECK(c.samples.front().second == 0);
        long prev = 0;
        for (auto [tick, delivered] : c.samples) {
            REQUIRE(delivered >= prev);
            prev = delivered;
        }
        CHECK(c.samples.back().second == c.final_count);
        CHECK(c.samples.back().first == ctx.arena.trial_ticks);
    }
}

TEST_CASE("replay trace has trial_ticks + 1 rows including the initial state") {
    TrialContext ctx = testsupport::small_context();
    Genome g = wandering_genome();
    ReplayResult r = replay_trial(g, AblationMask::all_enabled(), 3, ctx);
    CHECK(r.rows.size() == static_cast<std::size_t>(ctx.arena.trial_ticks) + 1);
    CHECK(r.rows.front().tick == 0);
    CHECK(r.rows.front().delivered == 0);
    CHECK(r.rows.back().tick == ctx.arena.trial_ticks);
    CHECK(r.final_world.tick == ctx.arena.trial_ticks);
    CHECK(r.rows.back().delivered == r.final_world.delivered);
}

TEST_CASE("interface mismatch is rejected") {
    TrialContext ctx = testsupport::small_context();
    Genome g; // 14 inputs only
    for (int i = 0; i < 14; ++i) g.nodes.push_back({i, NodeKind::Input});
    for (int o = 0; o < 3; ++o) g.nodes.push_back({20 + o, NodeKind::Output});
    CHECK_THROWS_AS(run_trial(g, AblationMask::all_enabled(), 1, ctx),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_trial_runner(g, ctx), std::invalid_argument);
}

TEST_CASE("the mock runner scores 10 per enabled critical group") {
    TrialFn mock = make_mock_runner();
    CHECK(mock(AblationMask::all_enabled(), 1).final_count == 20);
    AblationMask no_holding;
    no_holding.disable(ChannelGroup::HoldingFood, 0.0);
    CHECK(mock(no_holding, 1).final_count == 10);
    AblationMask neither;
    neither.disable(ChannelGroup::HoldingFood, 0.0)
        .disable(ChannelGroup::NestLight, 0.0);
    CHECK(mock(neither, 1).final_count == 0);
    AblationMask irrelevant;
    irrelevant.disable(ChannelGroup::Compass, 0.0)
        .disable(ChannelGroup::Pheromone, 1.0);
    CHECK(mock(irrelevant, 7).final_count == 20);
}

TEST_CASE("spawn pose depends on the seed, robots start at the nest") {
    TrialContext ctx = testsupport::small_context();
    WorldState a = make_trial_world(1, ctx);
    WorldState b = make_trial_world(2, ctx);
    CHECK(a.robots[0].pose.x == ctx.arena.nest_center.x);
    CHECK(a.robots[0].pose.y == ctx.arena.nest_center.y);
    CHECK(a.robots[0].pose.theta != b.robots[0].pose.theta);
}
