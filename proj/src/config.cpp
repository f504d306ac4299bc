#include "forage/config.hpp"

#include <stdexcept>

#include "forage/textio.hpp"
#include "json.hpp"

namespace forage {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& path) {
    if (!j.is_object())
        throw std::invalid_argument("config: " + path + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw std::invalid_argument("config: unknown key '" + path + "." +
                                        it.key() + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& into) {
    if (j.contains(key)) into = j.at(key).get<T>();
}

void parse_arena(const json& j, ArenaConfig& c) {
    reject_unknown(j,
                   {"width", "height", "nest", "nest_radius", "collection_radius",
                    "robot_sensor_range", "wheel_base", "speed_scale", "tick_dt",
                    "trial_ticks", "pheromone_half_life", "pheromone_min_spacing",
                    "resource_count", "cluster_count", "cluster_spread", "robots"},
                   "arena");
    bool nest_given = j.contains("nest");
    read(j, "width", c.width);
    read(j, "height", c.height);
    if (nest_given) {
        const json& n = j.at("nest");
        if (!n.is_array() || n.size() != 2)
            throw std::invalid_argument("config: arena.nest must be [x, y]");
        c.nest_center = {n.at(0).get<double>(), n.at(1).get<double>()};
    } else {
        c.nest_center = {c.width / 2.0, c.height / 2.0};
    }
    read(j, "nest_radius", c.nest_radius);
    read(j, "collection_radius", c.collection_radius);
    read(j, "robot_sensor_range", c.robot_sensor_range);
    read(j, "wheel_base", c.wheel_base);
    read(j, "speed_scale", c.speed_scale);
    read(j, "tick_dt", c.tick_dt);
    read(j, "trial_ticks", c.trial_ticks);
    read(j, "pheromone_half_life", c.pheromone_half_life);
    read(j, "pheromone_min_spacing", c.pheromone_min_spacing);
    read(j, "resource_count", c.resource_count);
    read(j, "cluster_count", c.cluster_count);
    read(j, "cluster_spread", c.cluster_spread);
    read(j, "robots", c.robots);
}

void parse_controller(const json& j, ControllerConfig& c) {
    reject_unknown(j, {"passes", "sigmoid_slope", "pheromone_threshold", "use_bias"},
                   "controller");
    read(j, "passes", c.passes);
    read(j, "sigmoid_slope", c.sigmoid_slope);
    read(j, "pheromone_threshold", c.pheromone_threshold);
    read(j, "use_bias", c.use_bias);
}

void parse_evolution(const json& j, EvolutionConfig& c) {
    reject_unknown(j,
                   {"population_size", "generations", "c1", "c2", "c3",
                    "compat_threshold", "weight_mutate_rate", "weight_perturb_sd",
                    "add_node_rate", "add_connection_rate", "crossover_rate",
                    "elitism", "trial_seeds_per_eval", "distribution",
                    "stagnation_limit"},
                   "evolution");
    read(j, "population_size", c.population_size);
    read(j, "generations", c.generations);
    read(j, "c1", c.c1);
    read(j, "c2", c.c2);
    read(j, "c3", c.c3);
    read(j, "compat_threshold", c.compat_threshold);
    read(j, "weight_mutate_rate", c.weight_mutate_rate);
    read(j, "weight_perturb_sd", c.weight_perturb_sd);
    read(j, "add_node_rate", c.add_node_rate);
    read(j, "add_connection_rate", c.add_connection_rate);
    read(j, "crossover_rate", c.crossover_rate);
    read(j, "elitism", c.elitism);
    read(j, "trial_seeds_per_eval", c.trial_seeds_per_eval);
    if (j.contains("distribution"))
        c.distribution = distribution_from_string(j.at("distribution").get<std::string>());
    read(j, "stagnation_limit", c.stagnation_limit);
}

void parse_ablation(const json& j, AblationConfig& c) {
    reject_unknown(j, {"seeds", "alpha", "min_rel_drop", "replacement", "sample_stride"},
                   "ablation");
    if (j.contains("seeds")) {
        const json& s = j.at("seeds");
        if (s.is_number_integer()) {
            const long n = s.get<long>();
            if (n < 1)
                throw std::invalid_argument("config: ablation.seeds count must be >= 1");
            c.seeds.clear();
            for (long k = 1; k <= n; ++k)
                c.seeds.push_back(static_cast<std::uint64_t>(k));
        } else if (s.is_array()) {
            c.seeds.clear();
            for (const json& v : s) c.seeds.push_back(v.get<std::uint64_t>());
            if (c.seeds.empty())
                throw std::invalid_argument("config: ablation.seeds must be non-empty");
        } else {
            throw std::invalid_argument(
                "config: ablation.seeds must be a count or a list");
        }
    }
    read(j, "alpha", c.alpha);
    read(j, "min_rel_drop", c.min_rel_drop);
    if (j.contains("replacement")) {
        const json& r = j.at("replacement");
        reject_unknown(r,
                       {"compass", "holding", "nearfood", "nestlight", "pheromone",
                        "robotproximity"},
                       "ablation.replacement");
        for (ChannelGroup g : kAllGroups) {
            if (r.contains(group_name(g)))
                c.replacement[static_cast<std::size_t>(g)] =
                    r.at(group_name(g)).get<double>();
        }
    }
    read(j, "sample_stride", c.sample_stride);
}

void parse_io(const json& j, IoConfig& c) {
    reject_unknown(j, {"out_dir", "plots"}, "io");
    read(j, "out_dir", c.out_dir);
    read(j, "plots", c.plots);
}

} // namespace

void RunConfig::validate() const {
    arena.validate();
    controller.validate();
    evolution.validate();
    if (ablation.seeds.empty())
        throw std::invalid_argument("config: ablation.seeds must be non-empty");
    if (!(ablation.alpha > 0.0 && ablation.alpha < 1.0))
        throw std::invalid_argument("config: ablation.alpha must be in (0,1)");
    if (ablation.min_rel_drop < 0.0)
        throw std::invalid_argument("config: ablation.min_rel_drop must be >= 0");
    if (ablation.sample_stride < 1)
        throw std::invalid_argument("config: ablation.sample_stride must be >= 1");
}

RunConfig config_from_json(const std::string& text) {
    json j = json::parse(text);
    reject_unknown(j, {"arena", "controller", "evolution", "ablation", "io"}, "$");
    RunConfig config;
    if (j.contains("arena")) parse_arena(j.at("arena"), config.arena);
    if (j.contains("controller")) parse_controller(j.at("controller"), config.controller);
    if (j.contains("evolution")) parse_evolution(j.at("evolution"), config.evolution);
    if (j.contains("ablation")) parse_ablation(j.at("ablation"), config.ablation);
    if (j.contains("io")) parse_io(j.at("io"), config.io);
    config.validate();
    return config;
}

std::string config_to_json(const RunConfig& c) {
    json replacement = json::object();
    for (ChannelGroup g : kAllGroups)
        replacement[group_name(g)] = c.ablation.replacement[static_cast<std::size_t>(g)];
    json j{
        {"arena",
         {{"width", c.arena.width},
          {"height", c.arena.height},
          {"nest", {c.arena.nest_center.x, c.arena.nest_center.y}},
          {"nest_radius", c.arena.nest_radius},
          {"collection_radius", c.arena.collection_radius},
          {"robot_sensor_range", c.arena.robot_sensor_range},
          {"wheel_base", c.arena.wheel_base},
          {"speed_scale", c.arena.speed_scale},
          {"tick_dt", c.arena.tick_dt},
          {"trial_ticks", c.arena.trial_ticks},
          {"pheromone_half_life", c.arena.pheromone_half_life},
          {"pheromone_min_spacing", c.arena.pheromone_min_spacing},
          {"resource_count", c.arena.resource_count},
          {"cluster_count", c.arena.cluster_count},
          {"cluster_spread", c.arena.cluster_spread},
          {"robots", c.arena.robots}}},
        {"controller",
         {{"passes", c.controller.passes},
          {"sigmoid_slope", c.controller.sigmoid_slope},
          {"pheromone_threshold", c.controller.pheromone_threshold},
          {"use_bias", c.controller.use_bias}}},
        {"evolution",
         {{"population_size", c.evolution.population_size},
          {"generations", c.evolution.generations},
          {"c1", c.evolution.c1},
          {"c2", c.evolution.c2},
          {"c3", c.evolution.c3},
          {"compat_threshold", c.evolution.compat_threshold},
          {"weight_mutate_rate", c.evolution.weight_mutate_rate},
          {"weight_perturb_sd", c.evolution.weight_perturb_sd},
          {"add_node_rate", c.evolution.add_node_rate},
          {"add_connection_rate", c.evolution.add_connection_rate},
          {"crossover_rate", c.evolution.crossover_rate},
          {"elitism", c.evolution.elitism},
          {"trial_seeds_per_eval", c.evolution.trial_seeds_per_eval},
          {"distribution", to_string(c.evolution.distribution)},
          {"stagnation_limit", c.evolution.stagnation_limit}}},
        {"ablation",
         {{"seeds", c.ablation.seeds},
          {"alpha", c.ablation.alpha},
          {"min_rel_drop", c.ablation.min_rel_drop},
          {"replacement", std::move(replacement)},
          {"sample_stride", c.ablation.sample_stride}}},
        {"io", {{"out_dir", c.io.out_dir}, {"plots", c.io.plots}}}};
    return j.dump(2) + "\n";
}

RunConfig load_config(const std::string& path) {
    return config_from_json(read_file(path));
}

void save_config(const std::string& path, const RunConfig& config) {
    write_file(path, config_to_json(config));
}

} // namespace forage
