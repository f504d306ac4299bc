#include "forage/manifest.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace forage {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::string_view data) {
    std::uint64_t h = fnv1a64(data);
    std::ostringstream out;
    out << "fnv1a:" << std::hex << h;
    return out.str();
}

using nlohmann::json;

std::string manifest_to_json(const ExperimentManifest& m) {
    json j{{"format", "forage-manifest"},
           {"version", 1},
           {"tool_version", m.tool_version},
           {"command", m.command},
           {"config_hash", m.config_hash},
           {"master_seed", m.master_seed},
           {"input_genome_hash", m.input_genome_hash},
           {"outputs", m.outputs}};
    return j.dump(2) + "\n";
}

ExperimentManifest manifest_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "forage-manifest")
        throw std::invalid_argument("manifest: unexpected format tag");
    ExperimentManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.input_genome_hash = j.at("input_genome_hash").get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
}

} // namespace forage
