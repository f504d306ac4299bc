#include "forage/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "forage/textio.hpp"
#include "json.hpp"

namespace forage {

namespace {

constexpr int kRingSensors = 24;           // 15 degree spacing
constexpr double kSensorStep = kPi / 12.0; // 15 degrees
constexpr int kPlacementRetries = 10000;

// body-frame direction of ring sensor i, offset half a step so no
// sensor sits exactly on a side boundary
double sensor_angle(int i) { return -kPi + (i + 0.5) * kSensorStep; }

// cardinal side of ring sensor i: 0 top (front), 1 left, 2 bottom, 3 right
int sensor_side(int i) {
    if (i >= 9 && i <= 14) return 0;
    if (i >= 15 && i <= 20) return 1;
    if (i >= 3 && i <= 8) return 3;
    return 2;
}

} // namespace

std::string to_string(Distribution d) {
    switch (d) {
    case Distribution::Clustered: return "clustered";
    case Distribution::Semiclustered: return "semiclustered";
    case Distribution::Uniform: return "uniform";
    }
    return "uniform";
}

Distribution distribution_from_string(const std::string& name) {
    if (name == "clustered") return Distribution::Clustered;
    if (name == "semiclustered") return Distribution::Semiclustered;
    if (name == "uniform") return Distribution::Uniform;
    throw std::invalid_argument("unknown distribution '" + name +
                                "' (valid: clustered, semiclustered, uniform)");
}

void ArenaConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("arena: ") + name +
                                        " must be > 0");
    };
    positive(width, "width");
    positive(height, "height");
    positive(nest_radius, "nest_radius");
    positive(collection_radius, "collection_radius");
    positive(robot_sensor_range, "robot_sensor_range");
    positive(wheel_base, "wheel_base");
    positive(speed_scale, "speed_scale");
    positive(tick_dt, "tick_dt");
    positive(pheromone_min_spacing, "pheromone_min_spacing");
    positive(cluster_spread, "cluster_spread");
    if (pheromone_half_life < 0.0)
        throw std::invalid_argument("arena: pheromone_half_life must be >= 0");
    if (trial_ticks < 1)
        throw std::invalid_argument("arena: trial_ticks must be >= 1");
    if (resource_count < 1)
        throw std::invalid_argument("arena: resource_count must be >= 1");
    if (cluster_count < 1)
        throw std::invalid_argument("arena: cluster_count must be >= 1");
    if (robots < 1) throw std::invalid_argument("arena: robots must be >= 1");
    if (nest_center.x - nest_radius < 0.0 || nest_center.x + nest_radius > width ||
        nest_center.y - nest_radius < 0.0 || nest_center.y + nest_radius > height)
        throw std::invalid_argument("arena: nest must lie fully inside the arena");
    if (!(collection_radius < nest_radius))
        throw std::invalid_argument("arena: collection_radius must be < nest_radius");
    if (!(nest_radius < std::min(width, height) / 2.0))
        throw std::invalid_argument("arena: nest_radius must be < min(width,height)/2");
}

// -- pheromone index ---------------------------------------------------

namespace {
std::uint64_t cell_key(int cx, int cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
}
} // namespace

void PheromoneIndex::reset(double cell_size) {
    cell_size_ = cell_size;
    count_ = 0;
    cells_.clear();
}

void PheromoneIndex::insert(Vec2 pos, std::size_t mark_index) {
    int cx = static_cast<int>(std::floor(pos.x / cell_size_));
    int cy = static_cast<int>(std::floor(pos.y / cell_size_));
    cells_[cell_key(cx, cy)].push_back(mark_index);
    ++count_;
}

void PheromoneIndex::candidates(Vec2 pos, std::vector<std::size_t>& out) const {
    out.clear();
    int cx = static_cast<int>(std::floor(pos.x / cell_size_));
    int cy = static_cast<int>(std::floor(pos.y / cell_size_));
    for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
            auto it = cells_.find(cell_key(cx + dx, cy + dy));
            if (it == cells_.end()) continue;
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
    }
}

void WorldState::rebuild_pheromone_index() {
    pheromone_index.reset(config.collection_radius);
    for (std::size_t i = 0; i < pheromones.size(); ++i)
        pheromone_index.insert(pheromones[i].position, i);
}

// -- resource generation------------------------------------------------

std::vector<int> halving_partition(int total) {
    std::vector<int> sizes;
    int remaining = total;
    int size = total / 2;
    while (remaining > 0) {
        int s = std::min(remaining, std::max(1, size));
        sizes.push_back(s);
        remaining -= s;
        size /= 2;
    }
    return sizes;
}

namespace {

Vec2 sample_point_outside_nest(const ArenaConfig& cfg, Rng& rng) {
    for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
        Vec2 p{rng.uniform(0.0, cfg.width), rng.uniform(0.0, cfg.height)};
        if (distance(p, cfg.nest_center) > cfg.nest_radius) return p;
    }
    throw std::runtime_error("resource placement failed: arena too crowded");
}

// cluster centers are kept one spread away from walls and nest so every
// member lands in bounds and outside the nest disc by construction
Vec2 sample_cluster_center(const ArenaConfig& cfg, Rng& rng) {
    const double s = cfg.cluster_spread;
    if (cfg.width <= 2.0 * s || cfg.height <= 2.0 * s)
        throw std::runtime_error(
            "resource placement failed: cluster_spread too large for arena");
    for (int attempt = 0; attempt < kPlacementRetries; ++attempt) {
        Vec2 c{rng.uniform(s, cfg.width - s), rng.uniform(s, cfg.height - s)};
        if (distance(c, cfg.nest_center) > cfg.nest_radius + s) return c;
    }
    throw std::runtime_error("resource placement failed: no room for cluster");
}

Vec2 sample_in_disc(Vec2 center, double radius, Rng& rng) {
    double r = radius * std::sqrt(rng.next_double());
    double ang = rng.uniform(0.0, 2.0 * kPi);
    return {center.x + r * std::cos(ang), center.y + r * std::sin(ang)};
}

void place_clusters(const std::vector<int>& sizes, const ArenaConfig& cfg,
                    Rng& rng, GeneratedLayout& out) {
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        Vec2 center = sample_cluster_center(cfg, rng);
        out.cluster_centers.push_back(center);
        for (int m = 0; m < sizes[k]; ++m) {
            Resource r;
            r.position = sample_in_disc(center, cfg.cluster_spread, rng);
            r.cluster_id = static_cast<int>(k);
            out.resources.push_back(r);
        }
    }
}

} // namespace

GeneratedLayout generate_resources(Distribution mode, int total,
                                   const ArenaConfig& config, Rng& rng) {
    if (total < 1) throw std::invalid_argument("generate_resources: total must be >= 1");
    GeneratedLayout out;
    out.resources.reserve(static_cast<std::size_t>(total));
    switch (mode) {
    case Distribution::Uniform:
        for (int i = 0; i < total; ++i) {
            Resource r;
            r.position = sample_point_outside_nest(config, rng);
            out.resources.push_back(r);
        }
        break;
    case Distribution::Clustered: {
        if (total % config.cluster_count != 0)
            throw std::invalid_argument(
                "generate_resources: clustered mode needs total divisible by " +
                std::to_string(config.cluster_count));
        std::vector<int> sizes(static_cast<std::size_t>(config.cluster_count),
                               total / config.cluster_count);
        place_clusters(sizes, config, rng, out);
        break;
    }
    case Distribution::Semiclustered:
        place_clusters(halving_partition(total), config, rng, out);
        break;
    }
    return out;
}

// -- stepping -----------------------------------------------------------

namespace {

void integrate_pose(Pose& pose, double vl, double vr, const ArenaConfig& cfg) {
    const double v = cfg.speed_scale * (vl + vr) / 2.0;
    const double omega = cfg.speed_scale * (vr - vl) / cfg.wheel_base;
    const double dt = cfg.tick_dt;
    if (std::abs(omega) < 1e-12) {
        pose.x += v * std::cos(pose.theta) * dt;
        pose.y += v * std::sin(pose.theta) * dt;
    } else {
        const double radius = v / omega;
        const double theta1 = pose.theta + omega * dt;
        pose.x += radius * (std::sin(theta1) - std::sin(pose.theta));
        pose.y -= radius * (std::cos(theta1) - std::cos(pose.theta));
        pose.theta = theta1;
    }
    pose.x = std::clamp(pose.x, 0.0, cfg.width);
    pose.y = std::clamp(pose.y, 0.0, cfg.height);
    pose.theta = wrap_angle(pose.theta);
}

} // namespace

void step(WorldState& world, std::span<const ActuatorCommand> commands) {
    if (commands.size() != world.robots.size())
        throw std::invalid_argument("step: one command per robot required");
    const ArenaConfig& cfg = world.config;

    for (std::size_t i = 0; i < world.robots.size(); ++i) {
        RobotState& robot = world.robots[i];
        const ActuatorCommand& cmd = commands[i];
        const double vl = std::clamp(cmd.left_speed, -16.0, 16.0);
        const double vr = std::clamp(cmd.right_speed, -16.0, 16.0);
        integrate_pose(robot.pose, vl, vr, cfg);
        const Vec2 pos{robot.pose.x, robot.pose.y};

        if (!robot.holding) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_idx = 0;
            bool found = false;
            for (std::size_t r = 0; r < world.resources.size(); ++r) {
                if (world.resources[r].collected) continue;
                double d = distance(world.resources[r].position, pos);
                if (d < best) {
                    best = d;
                    best_idx = r;
                    found = true;
                }
            }
            if (found && best <= cfg.collection_radius) {
                world.resources[best_idx].collected = true;
                world.picked += 1;
                robot.holding = true;
            }
        }
        if (robot.holding && distance(pos, cfg.nest_center) <= cfg.nest_radius) {
            world.delivered += 1;
            robot.holding = false;
        }
        if (cmd.lay_pheromone) {
            bool spaced = !robot.last_pheromone_pos ||
                          distance(pos, *robot.last_pheromone_pos) >=
                              cfg.pheromone_min_spacing;
            if (spaced) {
                world.pheromones.push_back({pos, world.tick});
                world.pheromone_index.insert(pos, world.pheromones.size() - 1);
                robot.last_pheromone_pos = pos;
            }
        }
    }
    world.tick += 1;
}

// -- sensing ------------------------------------------------------------

bool pheromone_detectable(const PheromoneMark& mark, long now_tick,
                          const ArenaConfig& config) {
    if (config.pheromone_half_life <= 0.0) return true;
    const double age = static_cast<double>(now_tick - mark.birth_tick) * config.tick_dt;
    return age <= config.pheromone_half_life;
}

SensorFrame sense(const WorldState& world, std::size_t robot_index) {
    if (robot_index >= world.robots.size())
        throw std::invalid_argument("sense: robot index out of range");
    const ArenaConfig& cfg = world.config;
    const RobotState& robot = world.robots[robot_index];
    const Vec2 pos{robot.pose.x, robot.pose.y};
    const double theta = robot.pose.theta;

    SensorFrame frame;
    frame.compass = {0.0, 0.0, std::sin(theta / 2.0), std::cos(theta / 2.0)};
    frame.holding_food = robot.holding ? 1.0 : 0.0;

    // near-food triggers only while already carrying
    if (robot.holding) {
        for (const Resource& r : world.resources) {
            if (r.collected) continue;
            if (distance(r.position, pos) <= cfg.collection_radius) {
                frame.near_food = 1.0;
                break;
            }
        }
    }

    const double cos_t = std::cos(theta), sin_t = std::sin(theta);

    // nest light: linear falloff with forward-hemisphere cosine weighting
    {
        const double d_nest = distance(pos, cfg.nest_center);
        const double diag = std::sqrt(cfg.width * cfg.width + cfg.height * cfg.height);
        const double prox = std::clamp(1.0 - d_nest / diag, 0.0, 1.0);
        if (d_nest == 0.0) {
            frame.nest_light = {prox, prox, prox, prox};
        } else {
            const double bx = (cfg.nest_center.x - pos.x) / d_nest;
            const double by = (cfg.nest_center.y - pos.y) / d_nest;
            for (int i = 0; i < kRingSensors; ++i) {
                const double phi = sensor_angle(i);
                // global sensor direction = theta + phi
                const double dx = cos_t * std::cos(phi) - sin_t * std::sin(phi);
                const double dy = sin_t * std::cos(phi) + cos_t * std::sin(phi);
                const double cos_alpha = dx * bx + dy * by;
                if (cos_alpha <= 0.0) continue;
                double& slot = frame.nest_light[static_cast<std::size_t>(sensor_side(i))];
                slot = std::max(slot, prox * cos_alpha);
            }
        }
    }

    // pheromone detection within the collection radius; grid lookup when
    // the index is in sync, linear scan otherwise (hand-built worlds)
    {
        auto detect = [&](const PheromoneMark& mark) {
            return distance(mark.position, pos) <= cfg.collection_radius &&
                   pheromone_detectable(mark, world.tick, cfg);
        };
        if (world.pheromone_index.size() == world.pheromones.size()) {
            static thread_local std::vector<std::size_t> buf;
            world.pheromone_index.candidates(pos, buf);
            for (std::size_t idx : buf) {
                if (detect(world.pheromones[idx])) {
                    frame.pheromone = 1.0;
                    break;
                }
            }
        } else {
            for (const PheromoneMark& mark : world.pheromones) {
                if (detect(mark)) {
                    frame.pheromone = 1.0;
                    break;
                }
            }
        }
    }

    // other robots, same ring, 15 degree cones
    for (std::size_t j = 0; j < world.robots.size(); ++j) {
        if (j == robot_index) continue;
        const Vec2 other{world.robots[j].pose.x, world.robots[j].pose.y};
        const double d = distance(other, pos);
        const double reading = std::max(0.0, 1.0 - d / cfg.robot_sensor_range);
        if (reading <= 0.0) continue;
        if (d == 0.0) {
            // coincident robot: visible on every side
            for (auto& slot : frame.robot_proximity) slot = std::max(slot, reading);
            continue;
        }
        const double bearing = std::atan2(other.y - pos.y, other.x - pos.x);
        for (int i = 0; i < kRingSensors; ++i) {
            const double dir = theta + sensor_angle(i);
            if (std::abs(angle_diff(bearing, dir)) <= kSensorStep / 2.0) {
                double& slot =
                    frame.robot_proximity[static_cast<std::size_t>(sensor_side(i))];
                slot = std::max(slot, reading);
            }
        }
    }

    return frame;
}

std::array<double, 15> SensorFrame::channels() const {
    return {compass[0],     compass[1], compass[2],    compass[3],
            holding_food,   near_food,  nest_light[0], nest_light[1],
            nest_light[2],  nest_light[3], pheromone,  robot_proximity[0],
            robot_proximity[1], robot_proximity[2], robot_proximity[3]};
}

SensorFrame SensorFrame::from_channels(const std::array<double, 15>& ch) {
    SensorFrame f;
    f.compass = {ch[0], ch[1], ch[2], ch[3]};
    f.holding_food = ch[4];
    f.near_food = ch[5];
    f.nest_light = {ch[6], ch[7], ch[8], ch[9]};
    f.pheromone = ch[10];
    f.robot_proximity = {ch[11], ch[12], ch[13], ch[14]};
    return f;
}

// -- snapshot & export ---------------------------------------------------

using nlohmann::json;

namespace {

json arena_to_json(const ArenaConfig& c) {
    return json{{"width", c.width},
                {"height", c.height},
                {"nest", {c.nest_center.x, c.nest_center.y}},
                {"nest_radius", c.nest_radius},
                {"collection_radius", c.collection_radius},
                {"robot_sensor_range", c.robot_sensor_range},
                {"wheel_base", c.wheel_base},
                {"speed_scale", c.speed_scale},
                {"tick_dt", c.tick_dt},
                {"trial_ticks", c.trial_ticks},
                {"pheromone_half_life", c.pheromone_half_life},
                {"pheromone_min_spacing", c.pheromone_min_spacing},
                {"resource_count", c.resource_count},
                {"cluster_count", c.cluster_count},
                {"cluster_spread", c.cluster_spread},
                {"robots", c.robots}};
}

ArenaConfig arena_from_json(const json& j) {
    ArenaConfig c;
    c.width = j.at("width").get<double>();
    c.height = j.at("height").get<double>();
    c.nest_center = {j.at("nest").at(0).get<double>(), j.at("nest").at(1).get<double>()};
    c.nest_radius = j.at("nest_radius").get<double>();
    c.collection_radius = j.at("collection_radius").get<double>();
    c.robot_sensor_range = j.at("robot_sensor_range").get<double>();
    c.wheel_base = j.at("wheel_base").get<double>();
    c.speed_scale = j.at("speed_scale").get<double>();
    c.tick_dt = j.at("tick_dt").get<double>();
    c.trial_ticks = j.at("trial_ticks").get<long>();
    c.pheromone_half_life = j.at("pheromone_half_life").get<double>();
    c.pheromone_min_spacing = j.at("pheromone_min_spacing").get<double>();
    c.resource_count = j.at("resource_count").get<int>();
    c.cluster_count = j.at("cluster_count").get<int>();
    c.cluster_spread = j.at("cluster_spread").get<double>();
    c.robots = j.at("robots").get<int>();
    return c;
}

} // namespace

std::string world_to_json(const WorldState& world) {
    json robots = json::array();
    for (const RobotState& r : world.robots) {
        json jr{{"x", r.pose.x},
                {"y", r.pose.y},
                {"theta", r.pose.theta},
                {"holding", r.holding}};
        if (r.last_pheromone_pos)
            jr["last_pheromone"] = {r.last_pheromone_pos->x, r.last_pheromone_pos->y};
        else
            jr["last_pheromone"] = nullptr;
        robots.push_back(std::move(jr));
    }
    json resources = json::array();
    for (const Resource& r : world.resources) {
        resources.push_back(json{{"x", r.position.x},
                                 {"y", r.position.y},
                                 {"collected", r.collected},
                                 {"cluster", r.cluster_id}});
    }
    json pheromones = json::array();
    for (const PheromoneMark& m : world.pheromones) {
        pheromones.push_back(
            json{{"x", m.position.x}, {"y", m.position.y}, {"birth_tick", m.birth_tick}});
    }
    json j{{"format", "forage-world"},
           {"version", 1},
           {"config", arena_to_json(world.config)},
           {"tick", world.tick},
           {"robots", std::move(robots)},
           {"resources", std::move(resources)},
           {"pheromones", std::move(pheromones)},
           {"delivered", world.delivered},
           {"picked", world.picked}};
    return j.dump(2) + "\n";
}

WorldState world_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "forage-world")
        throw std::invalid_argument("world snapshot: unexpected format tag");
    WorldState w;
    w.config = arena_from_json(j.at("config"));
    w.tick = j.at("tick").get<long>();
    for (const json& jr : j.at("robots")) {
        RobotState r;
        r.pose = {jr.at("x").get<double>(), jr.at("y").get<double>(),
                  jr.at("theta").get<double>()};
        r.holding = jr.at("holding").get<bool>();
        if (!jr.at("last_pheromone").is_null())
            r.last_pheromone_pos =
                Vec2{jr.at("last_pheromone").at(0).get<double>(),
                     jr.at("last_pheromone").at(1).get<double>()};
        w.robots.push_back(std::move(r));
    }
    for (const json& jr : j.at("resources")) {
        Resource r;
        r.position = {jr.at("x").get<double>(), jr.at("y").get<double>()};
        r.collected = jr.at("collected").get<bool>();
        r.cluster_id = jr.at("cluster").get<int>();
        w.resources.push_back(r);
    }
    for (const json& jm : j.at("pheromones")) {
        w.pheromones.push_back(PheromoneMark{
            {jm.at("x").get<double>(), jm.at("y").get<double>()},
            jm.at("birth_tick").get<long>()});
    }
    w.delivered = j.at("delivered").get<long>();
    w.picked = j.at("picked").get<long>();
    w.rebuild_pheromone_index();
    return w;
}

std::string layout_to_csv(const std::vector<Resource>& resources) {
    std::ostringstream out;
    out << "x,y,cluster_id\n";
    for (const Resource& r : resources) {
        out << fmt_double(r.position.x) << ',' << fmt_double(r.position.y) << ','
            << r.cluster_id << '\n';
    }
    return out.str();
}

} // namespace forage
