#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "forage/geom.hpp"
#include "forage/rng.hpp"

namespace forage {

enum class Distribution { Clustered, Semiclustered, Uniform };

std::string to_string(Distribution d);
Distribution distribution_from_string(const std::string& name); // throws std::invalid_argument

struct ArenaConfig {
    double width = 10.0;
    double height = 10.0;
    Vec2 nest_center{5.0, 5.0};
    double nest_radius = 0.3;
    double collection_radius = 0.1; // resources and pheromone detection
    double robot_sensor_range = 0.5;
    double wheel_base = 0.1;
    double speed_scale = 0.01; // arena-units/s per wheel-speed-unit
    double tick_dt = 0.1;      // seconds
    long trial_ticks = 5000;
    double pheromone_half_life = 0.0; // seconds; 0 means no decay
    double pheromone_min_spacing = 0.05;
    int resource_count = 64;
    int cluster_count = 4;
    double cluster_spread = 0.3;
    int robots = 1;

    void validate() const; // throws std::invalid_argument
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0; // [-pi, pi)
};

struct RobotState {
    Pose pose;
    bool holding = false;
    std::optional<Vec2> last_pheromone_pos;
};

struct Resource {
    Vec2 position;
    bool collected = false;
    int cluster_id = -1; // -1 for uniform placement
};

struct PheromoneMark {
    Vec2 position;
    long birth_tick = 0;
};

struct ActuatorCommand {
    double left_speed = 0.0;  // wheel-speed-units, [-16, 16]
    double right_speed = 0.0;
    bool lay_pheromone = false;
};

// Sparse cell index over pheromone marks so detection stays O(1) as
// trails grow. Rebuilt on deserialize, appended on lay.
class PheromoneIndex {
public:
    void reset(double cell_size);
    void insert(Vec2 pos, std::size_t mark_index);
    // indices of marks whose cell is within one cell of pos
    void candidates(Vec2 pos, std::vector<std::size_t>& out) const;
    std::size_t size() const { return count_; }

private:
    double cell_size_ = 0.1;
    std::size_t count_ = 0;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

struct WorldState {
    ArenaConfig config;
    long tick = 0;
    std::vector<RobotState> robots;
    std::vector<Resource> resources;
    std::vector<PheromoneMark> pheromones;
    long delivered = 0;
    long picked = 0;
    PheromoneIndex pheromone_index; // derived, not serialized

    void rebuild_pheromone_index();
};

// The 15 input channels in their six groups. Cardinal vectors are
// ordered (top, left, bottom, right) in the robot body frame.
struct SensorFrame {
    std::array<double, 4> compass{}; // quaternion x, y, z, w
    double holding_food = 0.0;
    double near_food = 0.0;
    std::array<double, 4> nest_light{};
    double pheromone = 0.0;
    std::array<double, 4> robot_proximity{};

    std::array<double, 15> channels() const;
    static SensorFrame from_channels(const std::array<double, 15>& ch);
};

struct GeneratedLayout {
    std::vector<Resource> resources;
    std::vector<Vec2> cluster_centers; // empty for uniform
};

// Cluster sizes {total/2, total/4, ...} padded with singletons; the
// semi-clustered piles follow this partition.
std::vector<int> halving_partition(int total);

GeneratedLayout generate_resources(Distribution mode, int total,
                                   const ArenaConfig& config, Rng& rng);

// Advances every robot one tick: arc integration of the differential
// drive, clamp to bounds, automatic pickup/drop, pheromone laying.
void step(WorldState& world, std::span<const ActuatorCommand> commands);

SensorFrame sense(const WorldState& world, std::size_t robot_index);

bool pheromone_detectable(const PheromoneMark& mark, long now_tick,
                          const ArenaConfig& config);

// Snapshot record (JSON). Round-trips everything except the derived
// pheromone index.
std::string world_to_json(const WorldState& world);
WorldState world_from_json(const std::string& text);

std::string layout_to_csv(const std::vector<Resource>& resources);

} // namespace forage
