#include "forage/trial.hpp"

#include <memory>
#include <stdexcept>

#include "forage/rng.hpp"

namespace forage {

namespace {

void check_interface(const Network& net) {
    if (net.input_count() != kChannelCount || net.output_count() != 3)
        throw std::invalid_argument(
            "genome interface mismatch: expected 15 inputs and 3 outputs, got " +
            std::to_string(net.input_count()) + "/" +
            std::to_string(net.output_count()));
}

} // namespace

WorldState make_trial_world(std::uint64_t seed, const TrialContext& ctx) {
    ctx.arena.validate();
    WorldState world;
    world.config = ctx.arena;

    Rng rng(derive_seed(seed, {0x776f726c64ULL})); // "world" stream
    GeneratedLayout layout =
        generate_resources(ctx.distribution, ctx.arena.resource_count, ctx.arena, rng);
    world.resources = std::move(layout.resources);

    for (int i = 0; i < ctx.arena.robots; ++i) {
        RobotState robot;
        robot.pose.x = ctx.arena.nest_center.x;
        robot.pose.y = ctx.arena.nest_center.y;
        robot.pose.theta = wrap_angle(rng.uniform(-kPi, kPi));
        world.robots.push_back(robot);
    }
    world.rebuild_pheromone_index();
    return world;
}

EfficiencyCurve run_trial(const Network& net, const AblationMask& mask,
                          std::uint64_t seed, const TrialContext& ctx) {
    check_interface(net);
    ctx.controller.validate();
    if (ctx.sample_stride < 1)
        throw std::invalid_argument("run_trial: sample_stride must be >= 1");

    WorldState world = make_trial_world(seed, ctx);
    std::vector<NetworkState> states(world.robots.size());
    for (auto& s : states) s = net.initial_state();

    EfficiencyCurve curve;
    curve.trial_seed = seed;
    curve.samples.emplace_back(0, 0);

    std::vector<ActuatorCommand> commands(world.robots.size());
    for (long t = 0; t < ctx.arena.trial_ticks; ++t) {
        for (std::size_t r = 0; r < world.robots.size(); ++r)
            commands[r] = control_tick(net, states[r], world, r, mask, ctx.controller);
        step(world, commands);
        if (world.tick % ctx.sample_stride == 0 || t + 1 == ctx.arena.trial_ticks)
            curve.samples.emplace_back(world.tick, world.delivered);
    }
    curve.final_count = world.delivered;
    curve.final_picked = world.picked;
    return curve;
}

EfficiencyCurve run_trial(const Genome& genome, const AblationMask& mask,
                          std::uint64_t seed, const TrialContext& ctx) {
    Network net(genome, ctx.controller.sigmoid_slope);
    return run_trial(net, mask, seed, ctx);
}

ReplayResult replay_trial(const Genome& genome, const AblationMask& mask,
                          std::uint64_t seed, const TrialContext& ctx) {
    Network net(genome, ctx.controller.sigmoid_slope);
    check_interface(net);
    ctx.controller.validate();

    ReplayResult result;
    WorldState& world = result.final_world;
    world = make_trial_world(seed, ctx);
    std::vector<NetworkState> states(world.robots.size());
    for (auto& s : states) s = net.initial_state();

    result.rows.reserve(static_cast<std::size_t>(ctx.arena.trial_ticks) + 1);
    auto record = [&](bool laid) {
        const RobotState& r = world.robots[0];
        result.rows.push_back(TraceRow{world.tick, r.pose.x, r.pose.y, r.pose.theta,
                                       r.holding, world.delivered, laid});
    };
    record(false);

    std::vector<ActuatorCommand> commands(world.robots.size());
    for (long t = 0; t < ctx.arena.trial_ticks; ++t) {
        const std::optional<Vec2> prev_mark = world.robots[0].last_pheromone_pos;
        for (std::size_t r = 0; r < world.robots.size(); ++r)
            commands[r] = control_tick(net, states[r], world, r, mask, ctx.controller);
        step(world, commands);
        const std::optional<Vec2>& now_mark = world.robots[0].last_pheromone_pos;
        const bool laid = commands[0].lay_pheromone && now_mark &&
                          (!prev_mark || prev_mark->x != now_mark->x ||
                           prev_mark->y != now_mark->y);
        record(laid);
    }
    return result;
}

TrialFn make_trial_runner(const Genome& genome, const TrialContext& ctx) {
    auto net = std::make_shared<Network>(genome, ctx.controller.sigmoid_slope);
    check_interface(*net);
    return [net, ctx](const AblationMask& mask, std::uint64_t seed) {
        return run_trial(*net, mask, seed, ctx);
    };
}

TrialFn make_mock_runner() {
    return [](const AblationMask& mask, std::uint64_t seed) {
        long final_count = 0;
        if (mask.is_enabled(ChannelGroup::HoldingFood)) final_count += 10;
        if (mask.is_enabled(ChannelGroup::NestLight)) final_count += 10;
        EfficiencyCurve curve;
        curve.trial_seed = seed;
        curve.samples = {{0, 0}, {5000, final_count}};
        curve.final_count = final_count;
        curve.final_picked = final_count;
        return curve;
    };
}

} // namespace forage
