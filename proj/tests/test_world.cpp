#include <algorithm>
#include <cmath>
#include <map>

#include <stdexcept>

#include "doctest.h"

#include "forage/trial.hpp"
#include "forage/world.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace forage;

namespace {

WorldState empty_world() {
    WorldState w;
    w.config = ArenaConfig{};
    w.robots.push_back(RobotState{});
    w.robots[0].pose = {5.0, 5.0, 0.0};
    return w;
}

} // namespace

TEST_CASE("straight-line kinematics: vl=vr=16 advances x by 0.016") {
    WorldState w = empty_world();
    w.robots[0].pose = {2.0, 2.0, 0.0};
    step(w, std::vector<ActuatorCommand>{{16.0, 16.0, false}});
    CHECK(w.robots[0].pose.x == doctest::Approx(2.016).epsilon(1e-12));
    CHECK(w.robots[0].pose.y == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(w.robots[0].pose.theta == doctest::Approx(0.0));
    CHECK(w.tick == 1);
}

TEST_CASE("pure rotation: vl=-16, vr=16 keeps position") {
    WorldState w = empty_world();
    w.robots[0].pose = {3.0, 4.0, 1.0};
    step(w, std::vector<ActuatorCommand>{{-16.0, 16.0, false}});
    CHECK(w.robots[0].pose.x == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(w.robots[0].pose.y == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(w.robots[0].pose.theta != doctest::Approx(1.0));
}

TEST_CASE("pickup fires within collection radius and sets holding") {
    WorldState w = empty_world();
    w.robots[0].pose = {5.0, 8.0, 0.0};
    w.resources.push_back({{5.05, 8.0}, false, -1});
    step(w, std::vector<ActuatorCommand>{{0.0, 0.0, false}});
    CHECK(w.robots[0].holding);
    CHECK(w.picked == 1);
    CHECK(w.resources[0].collected);

    SUBCASE("collected resources never re-collected") {
        step(w, std::vector<ActuatorCommand>{{0.0, 0.0, false}});
        CHECK(w.picked == 1);
    }
}

TEST_CASE("holding robot inside the nest delivers") {
    WorldState w = empty_world();
    w.robots[0].pose = {5.1, 5.0, 0.0};
    w.robots[0].holding = true;
    step(w, std::vector<ActuatorCommand>{{0.0, 0.0, false}});
    CHECK_FALSE(w.robots[0].holding);
    CHECK(w.delivered == 1);
}

TEST_CASE("command count mismatch rejected") {
    WorldState w = empty_world();
    std::vector<ActuatorCommand> none;
    CHECK_THROWS_AS(step(w, none), std::invalid_argument);
}

TEST_CASE("pheromone laying respects min spacing") {
    WorldState w = empty_world();
    w.rebuild_pheromone_index();
    w.robots[0].pose = {5.0, 8.0, 0.0};
    step(w, std::vector<ActuatorCommand>{{0.0, 0.0, true}});
    CHECK(w.pheromones.size() == 1);
    // stationary robot lays again: rejected, too close to its own mark
    step(w, std::vector<ActuatorCommand>{{0.0, 0.0, true}});
    CHECK(w.pheromones.size() == 1);
    // drive forward past the spacing and lay again
    for (int i = 0; i < 5; ++i) step(w, std::vector<ActuatorCommand>{{16.0, 16.0, false}});
    step(w, std::vector<ActuatorCommand>{{0.0, 0.0, true}});
    CHECK(w.pheromones.size() == 2);
}

TEST_CASE("pheromone decay with finite half-life") {
    ArenaConfig cfg;
    PheromoneMark mark{{1.0, 1.0}, 0};
    SUBCASE("infinite half-life always detectable") {
        cfg.pheromone_half_life = 0.0;
        CHECK(pheromone_detectable(mark, 1000000, cfg));
    }
    SUBCASE("finite half-life cuts off at strength 0.5") {
        cfg.pheromone_half_life = 10.0; // = 100 ticks at dt 0.1
        CHECK(pheromone_detectable(mark, 100, cfg));
        CHECK_FALSE(pheromone_detectable(mark, 101, cfg));
    }
}

TEST_CASE("compass quaternion") {
    WorldState w = empty_world();
    SUBCASE("theta=0 gives identity rotation") {
        SensorFrame f = sense(w, 0);
        CHECK(f.compass[0] == 0.0);
        CHECK(f.compass[1] == 0.0);
        CHECK(f.compass[2] == doctest::Approx(0.0));
        CHECK(f.compass[3] == doctest::Approx(1.0));
    }
    SUBCASE("theta=pi gives the half-turn quaternion (up to sign)") {
        // pi wraps to -pi under the [-pi, pi) convention; q and -q are the
        // same rotation, so check |z| = 1, w = 0 and the rotated x-axis
        w.robots[0].pose.theta = wrap_angle(kPi);
        SensorFrame f = sense(w, 0);
        CHECK(std::abs(f.compass[2]) == doctest::Approx(1.0));
        CHECK(f.compass[3] == doctest::Approx(0.0));
        const double z = f.compass[2], qw = f.compass[3];
        // rotate (1,0,0) by the quaternion: x' = 1 - 2z^2
        CHECK(1.0 - 2.0 * z * z == doctest::Approx(-1.0));
        CHECK(2.0 * qw * z == doctest::Approx(0.0));
    }
    SUBCASE("unit norm for random headings") {
        Rng rng(7);
        for (int i = 0; i < 200; ++i) {
            w.robots[0].pose.theta = wrap_angle(rng.uniform(-10.0, 10.0));
            SensorFrame f = sense(w, 0);
            double norm2 = 0.0;
            for (double c : f.compass) norm2 += c * c;
            CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("nest light at the nest center is maximal and uniform") {
    WorldState w = empty_world();
    SensorFrame f = sense(w, 0);
    for (double v : f.nest_light) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("robot alone sees zero robot proximity") {
    WorldState w = empty_world();
    w.robots[0].pose = {2.0, 3.0, 0.7};
    SensorFrame f = sense(w, 0);
    for (double v : f.robot_proximity) CHECK(v == 0.0);
}

TEST_CASE("robot proximity sees a nearby robot on the correct side") {
    WorldState w = empty_world();
    w.robots[0].pose = {5.0, 5.0, 0.0};
    RobotState other;
    other.pose = {5.25, 5.0, 0.0}; // dead ahead, half the sensor range
    w.robots.push_back(other);
    SensorFrame f = sense(w, 0);
    CHECK(f.robot_proximity[0] == doctest::Approx(0.5)); // top/front
    CHECK(f.robot_proximity[1] == 0.0);
    CHECK(f.robot_proximity[2] == 0.0);
    CHECK(f.robot_proximity[3] == 0.0);
}

TEST_CASE("near_food implies holding_food") {
    // the caveat: proximity to food reads 0 while not carrying
    WorldState w = empty_world();
    w.robots[0].pose = {5.0, 8.0, 0.0};
    w.resources.push_back({{5.05, 8.0}, false, -1});
    SensorFrame f = sense(w, 0);
    CHECK(f.near_food == 0.0);
    CHECK(f.holding_food == 0.0);

    w.robots[0].holding = true;
    f = sense(w, 0);
    CHECK(f.near_food == 1.0);
    CHECK(f.holding_food == 1.0);
}

TEST_CASE("monotone homing: nest light max is non-decreasing on approach") {
    WorldState w = empty_world();
    // fixed heading pointing at the nest, stepping along the bearing line
    w.robots[0].pose = {1.0, 1.0, std::atan2(4.0, 4.0)};
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        double t = i / 40.0;
        w.robots[0].pose.x = 1.0 + t * 4.0;
        w.robots[0].pose.y = 1.0 + t * 4.0;
        SensorFrame f = sense(w, 0);
        double best = *std::max_element(f.nest_light.begin(), f.nest_light.end());
        CHECK(best >= prev);
        prev = best;
    }
}

TEST_CASE("sensor frame channel packing round-trips") {
    SensorFrame f;
    f.compass = {0.1, 0.2, 0.3, 0.4};
    f.holding_food = 1.0;
    f.near_food = 0.0;
    f.nest_light = {0.5, 0.6, 0.7, 0.8};
    f.pheromone = 1.0;
    f.robot_proximity = {0.15, 0.25, 0.35, 0.45};
    auto ch = f.channels();
    SensorFrame g = SensorFrame::from_channels(ch);
    CHECK(g.channels() == ch);
    CHECK(ch[10] == 1.0); // pheromone is channel 11 in 1-based terms
}

TEST_CASE("generators: clustered gives equal clusters within spread") {
    ArenaConfig cfg;
    Rng rng(1);
    GeneratedLayout layout = generate_resources(Distribution::Clustered, 64, cfg, rng);
    REQUIRE(layout.resources.size() == 64);
    REQUIRE(layout.cluster_centers.size() == 4);
    std::map<int, int> sizes;
    for (const Resource& r : layout.resources) {
        sizes[r.cluster_id] += 1;
        REQUIRE(r.cluster_id >= 0);
        CHECK(distance(r.position,
                       layout.cluster_centers[static_cast<std::size_t>(r.cluster_id)]) <=
              cfg.cluster_spread);
    }
    for (auto [id, n] : sizes) CHECK(n == 16);
}

TEST_CASE("generators: clustered rejects indivisible totals") {
    ArenaConfig cfg;
    Rng rng(1);
    CHECK_THROWS_AS(generate_resources(Distribution::Clustered, 63, cfg, rng),
                    std::invalid_argument);
}

TEST_CASE("generators: semiclustered sizes follow the halving partition") {
    ArenaConfig cfg;
    Rng rng(1);
    GeneratedLayout layout =
        generate_resources(Distribution::Semiclustered, 64, cfg, rng);
    REQUIRE(layout.resources.size() == 64);
    std::map<int, int> sizes;
    for (const Resource& r : layout.resources) sizes[r.cluster_id] += 1;
    std::vector<int> got;
    for (auto [id, n] : sizes) got.push_back(n);
    std::sort(got.rbegin(), got.rend());
    CHECK(got == std::vector<int>{32, 16, 8, 4, 2, 1, 1});
    CHECK(halving_partition(64) == std::vector<int>{32, 16, 8, 4, 2, 1, 1});
}

TEST_CASE("halving partition matches the recursive oracle") {
    for (int total : {1, 2, 3, 5, 10, 17, 64, 100, 255}) {
        auto sizes = halving_partition(total);
        CHECK(sizes == oracle::halving_sizes(total));
        int sum = 0;
        for (int s : sizes) sum += s;
        CHECK(sum == total);
    }
}

TEST_CASE("generators: uniform places everything in bounds outside the nest") {
    ArenaConfig cfg;
    Rng rng(1);
    GeneratedLayout layout = generate_resources(Distribution::Uniform, 100, cfg, rng);
    REQUIRE(layout.resources.size() == 100);
    for (const Resource& r : layout.resources) {
        CHECK(r.position.x >= 0.0);
        CHECK(r.position.x <= cfg.width);
        CHECK(r.position.y >= 0.0);
        CHECK(r.position.y <= cfg.height);
        CHECK(distance(r.position, cfg.nest_center) > cfg.nest_radius);
        CHECK(r.cluster_id == -1);
    }
}

TEST_CASE("conservation: picked = delivered + currently holding") {
    TrialContext ctx = testsupport::small_context();
    WorldState w = make_trial_world(5, ctx);
    Rng rng(99);
    for (int t = 0; t < 600; ++t) {
        std::vector<ActuatorCommand> cmds(w.robots.size());
        for (auto& c : cmds) {
            c.left_speed = rng.uniform(-16.0, 16.0);
            c.right_speed = rng.uniform(-16.0, 16.0);
            c.lay_pheromone = rng.chance(0.2);
        }
        step(w, cmds);
        long holding = 0;
        for (const RobotState& r : w.robots) holding += r.holding ? 1 : 0;
        REQUIRE(w.picked == w.delivered + holding);
        REQUIRE(w.delivered <= w.picked);
        long collected = 0;
        for (const Resource& r : w.resources) collected += r.collected ? 1 : 0;
        REQUIRE(w.picked == collected);
        REQUIRE(w.robots[0].pose.x >= 0.0);
        REQUIRE(w.robots[0].pose.x <= w.config.width);
        REQUIRE(w.robots[0].pose.y >= 0.0);
        REQUIRE(w.robots[0].pose.y <= w.config.height);
        REQUIRE(w.robots[0].pose.theta >= -kPi);
        REQUIRE(w.robots[0].pose.theta < kPi);
    }
    CHECK(w.tick == 600);
}

TEST_CASE("world snapshot round-trips") {
    TrialContext ctx = testsupport::small_context();
    WorldState w = make_trial_world(11, ctx);
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
        std::vector<ActuatorCommand> cmds{
            {rng.uniform(-16.0, 16.0), rng.uniform(-16.0, 16.0), rng.chance(0.5)}};
        step(w, cmds);
    }
    std::string text = world_to_json(w);
    WorldState w2 = world_from_json(text);
    CHECK(world_to_json(w2) == text);
    CHECK(w2.tick == w.tick);
    CHECK(w2.picked == w.picked);
    // the rebuilt index answers sensing identically
    CHECK(sense(w2, 0).pheromone == sense(w, 0).pheromone);
}

TEST_CASE("layout CSV has the documented header") {
    std::vector<Resource> rs{{{1.5, 2.5}, false, 0}, {{3.0, 4.0}, false, -1}};
    std::string csv = layout_to_csv(rs);
    CHECK(csv.substr(0, 15) == "x,y,cluster_id\n");
    CHECK(csv.find("1.5,2.5,0\n") != std::string::npos);
    CHECK(csv.find("3,4,-1\n") != std::string::npos);
}

TEST_CASE("arena config invariants are enforced") {
    ArenaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    SUBCASE("collection radius below nest radius") {
        cfg.collection_radius = 0.5;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("nest inside arena") {
        cfg.nest_center = {0.1, 5.0};
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
    SUBCASE("positive lengths") {
        cfg.wheel_base = 0.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    }
}
