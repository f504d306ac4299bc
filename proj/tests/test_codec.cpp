#include <array>

#include <stdexcept>

#include "doctest.h"

#include "forage/codec.hpp"
#include "forage/rng.hpp"
#include "forage/trial.hpp"
#include "support/helpers.hpp"

using namespace forage;

namespace {

SensorFrame random_frame(Rng& rng) {
    std::array<double, 15> ch;
    for (double& v : ch) v = rng.uniform(-1.0, 1.0);
    return SensorFrame::from_channels(ch);
}

} // namespace

TEST_CASE("identity mask passes the 15 scalars through verbatim") {
    Rng rng(1);
    SensorFrame f = random_frame(rng);
    auto out = encode_sensors(f, AblationMask::all_enabled());
    CHECK(out == f.channels());
}

TEST_CASE("disabling pheromone with constant 1 pins channel 11") {
    Rng rng(2);
    SensorFrame f = random_frame(rng);
    AblationMask mask;
    mask.disable(ChannelGroup::Pheromone, 1.0);
    auto out = encode_sensors(f, mask);
    CHECK(out[10] == 1.0); // channel 11, 1-based
    auto plain = f.channels();
    for (int i = 0; i < 15; ++i)
        if (i != 10) CHECK(out[static_cast<std::size_t>(i)] == plain[static_cast<std::size_t>(i)]);
}

TEST_CASE("disabling compass zeroes channels 1-4 only") {
    WorldState w;
    w.config = ArenaConfig{};
    w.robots.push_back(RobotState{});
    w.robots[0].pose = {5.0, 5.0, kPi / 2.0};
    SensorFrame f = sense(w, 0);
    AblationMask mask;
    mask.disable(ChannelGroup::Compass, 0.0);
    auto out = encode_sensors(f, mask);
    for (int i = 0; i < 4; ++i) CHECK(out[static_cast<std::size_t>(i)] == 0.0);
    auto plain = f.channels();
    for (int i = 4; i < 15; ++i)
        CHECK(out[static_cast<std::size_t>(i)] == plain[static_cast<std::size_t>(i)]);
}

TEST_CASE("mask idempotence over random masks and frames") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        AblationMask mask;
        for (ChannelGroup g : kAllGroups)
            if (rng.chance(0.5)) mask.disable(g, rng.uniform(-1.0, 1.0));
        SensorFrame f = random_frame(rng);
        auto once = encode_sensors(f, mask);
        auto twice = encode_sensors(SensorFrame::from_channels(once), mask);
        REQUIRE(once == twice);
    }
}

TEST_CASE("channel-group isolation: disabling g changes only g's span") {
    Rng rng(4);
    for (ChannelGroup g : kAllGroups) {
        for (int trial = 0; trial < 50; ++trial) {
            SensorFrame f = random_frame(rng);
            AblationMask mask;
            mask.disable(g, 9.0); // sentinel the live values never take
            auto masked = encode_sensors(f, mask);
            auto plain = f.channels();
            for (int i = 0; i < 15; ++i) {
                const bool inside =
                    i >= group_offset(g) && i < group_offset(g) + group_span(g);
                if (inside)
                    REQUIRE(masked[static_cast<std::size_t>(i)] == 9.0);
                else
                    REQUIRE(masked[static_cast<std::size_t>(i)] ==
                            plain[static_cast<std::size_t>(i)]);
            }
        }
    }
}

TEST_CASE("the six groups partition the 15 channels") {
    std::array<int, 15> covered{};
    for (ChannelGroup g : kAllGroups)
        for (int k = 0; k < group_span(g); ++k)
            covered[static_cast<std::size_t>(group_offset(g) + k)] += 1;
    for (int c : covered) CHECK(c == 1);
}

TEST_CASE("decode: midpoint maps to zero speed, no pheromone") {
    ActuatorCommand cmd = decode_actuators(std::array<double, 3>{0.5, 0.5, 0.0});
    CHECK(cmd.left_speed == 0.0);
    CHECK(cmd.right_speed == 0.0);
    CHECK_FALSE(cmd.lay_pheromone);
}

TEST_CASE("decode: extremes map to the wheel-speed limits") {
    ActuatorCommand cmd = decode_actuators(std::array<double, 3>{1.0, 0.0, 0.9});
    CHECK(cmd.left_speed == 16.0);
    CHECK(cmd.right_speed == -16.0);
    CHECK(cmd.lay_pheromone);
}

TEST_CASE("decode: linear scaling, strict threshold") {
    ActuatorCommand cmd = decode_actuators(std::array<double, 3>{0.75, 0.75, 0.5});
    CHECK(cmd.left_speed == doctest::Approx(8.0));
    CHECK(cmd.right_speed == doctest::Approx(8.0));
    CHECK_FALSE(cmd.lay_pheromone); // exactly at threshold is not "positive"
}

TEST_CASE("decode rejects outputs outside [0,1]") {
    CHECK_THROWS_AS(decode_actuators(std::array<double, 3>{1.2, 0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(decode_actuators(std::array<double, 2>{0.5, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("mask syntax parses the constant-1 pheromone form") {
    AblationMask mask = parse_mask("pheromone:off:1.0");
    CHECK_FALSE(mask.is_enabled(ChannelGroup::Pheromone));
    CHECK(mask.groups[static_cast<std::size_t>(ChannelGroup::Pheromone)].replacement ==
          1.0);
    for (ChannelGroup g :
         {ChannelGroup::Compass, ChannelGroup::HoldingFood, ChannelGroup::NearFood,
          ChannelGroup::NestLight, ChannelGroup::RobotProximity})
        CHECK(mask.is_enabled(g));

    CHECK_THROWS_AS(parse_mask("nest:off"), std::invalid_argument);
    CHECK_THROWS_AS(parse_mask("compass:maybe"), std::invalid_argument);
}

TEST_CASE("control tick: weightless genome gives zero speeds, no pheromone") {
    Genome g = testsupport::interface_genome(); // no connections at all
    Network net(g);
    NetworkState state = net.initial_state();
    TrialContext ctx = testsupport::small_context();
    WorldState w = make_trial_world(1, ctx);
    ActuatorCommand cmd =
        control_tick(net, state, w, 0, AblationMask::all_enabled(), ctx.controller);
    CHECK(cmd.left_speed == 0.0);
    CHECK(cmd.right_speed == 0.0);
    CHECK_FALSE(cmd.lay_pheromone);
}

TEST_CASE("control tick is deterministic for identical inputs") {
    Genome g = testsupport::interface_genome({{0, 16, 0.4}, {4, 17, -0.8}, {9, 18, 1.2}});
    Network net(g);
    TrialContext ctx = testsupport::small_context();
    WorldState w = make_trial_world(2, ctx);
    NetworkState s1 = net.initial_state();
    NetworkState s2 = net.initial_state();
    AblationMask mask;
    mask.disable(ChannelGroup::Compass, 0.25);
    ActuatorCommand a = control_tick(net, s1, w, 0, mask, ctx.controller);
    ActuatorCommand b = control_tick(net, s2, w, 0, mask, ctx.controller);
    CHECK(a.left_speed == b.left_speed);
    CHECK(a.right_speed == b.right_speed);
    CHECK(a.lay_pheromone == b.lay_pheromone);
    CHECK(s1.activations == s2.activations);
}

TEST_CASE("all-disabled mask makes the command a function of state only") {
    Genome g = testsupport::interface_genome(
        {{0, 16, 0.9}, {6, 17, -0.7}, {10, 18, 0.5}, {16, 16, 0.3}});
    Network net(g);
    TrialContext ctx = testsupport::small_context();
    AblationMask mask;
    for (ChannelGroup grp : kAllGroups) mask.disable(grp, 0.0);

    // two very different worlds, same network state: identical commands
    WorldState w1 = make_trial_world(3, ctx);
    WorldState w2 = make_trial_world(17, ctx);
    w2.robots[0].pose = {1.0, 9.0, -2.0};
    NetworkState s1 = net.initial_state();
    NetworkState s2 = net.initial_state();
    for (int t = 0; t < 5; ++t) {
        ActuatorCommand a = control_tick(net, s1, w1, 0, mask, ctx.controller);
        ActuatorCommand b = control_tick(net, s2, w2, 0, mask, ctx.controller);
        REQUIRE(a.left_speed == b.left_speed);
        REQUIRE(a.right_speed == b.right_speed);
        REQUIRE(a.lay_pheromone == b.lay_pheromone);
    }
}
