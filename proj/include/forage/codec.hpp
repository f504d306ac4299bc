#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "forage/network.hpp"
#include "forage/world.hpp"

namespace forage {

// The six sensor families toggled as a unit in ablation runs.
enum class ChannelGroup {
    Compass = 0,
    HoldingFood = 1,
    NearFood = 2,
    NestLight = 3,
    Pheromone = 4,
    RobotProximity = 5,
};

inline constexpr int kGroupCount = 6;
inline constexpr int kChannelCount = 15;

// [offset, offset+span) positions of each group in the channel vector:
// compass 0-3, holding 4, nearfood 5, nestlight 6-9, pheromone 10,
// robotproximity 11-14.
int group_offset(ChannelGroup g);
int group_span(ChannelGroup g);

extern const std::array<ChannelGroup, kGroupCount> kAllGroups;

// canonical lowercase names used by the CLI and mask syntax
std::string group_name(ChannelGroup g);
ChannelGroup group_from_name(const std::string& name); // throws with the valid names
std::string canonical_group_names();                   // "compass, holding, ..."

struct GroupMask {
    bool enabled = true;
    double replacement = 0.0;
};

struct AblationMask {
    std::array<GroupMask, kGroupCount> groups{};

    static AblationMask all_enabled() { return AblationMask{}; }
    AblationMask& disable(ChannelGroup g, double replacement = 0.0);
    AblationMask& enable(ChannelGroup g);
    bool is_enabled(ChannelGroup g) const;
};

// "pheromone:off:1.0,compass:off" -> mask; omitted groups stay enabled.
AblationMask parse_mask(const std::string& text);
std::string format_mask(const AblationMask& mask);

// Fixed channel order [compass x4, holding, nearfood, nestlight x4,
// pheromone, robotproximity x4]; disabled groups read their constant.
std::array<double, kChannelCount> encode_sensors(const SensorFrame& frame,
                                                 const AblationMask& mask);

// outputs in [0,1]: wheel speeds (o - 0.5) * 32, pheromone above the
// midpoint threshold lays a mark.
ActuatorCommand decode_actuators(std::span<const double> outputs,
                                 double pheromone_threshold = 0.5);

struct ControllerConfig {
    int passes = 3;
    double sigmoid_slope = 4.9;
    double pheromone_threshold = 0.5;
    bool use_bias = true;

    void validate() const;
};

// sense -> encode -> evaluate -> decode for one robot.
ActuatorCommand control_tick(const Network& net, NetworkState& state,
                             const WorldState& world, std::size_t robot_index,
                             const AblationMask& mask,
                             const ControllerConfig& controller);

} // namespace forage
