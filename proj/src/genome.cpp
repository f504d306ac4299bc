#include "forage/genome.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "forage/textio.hpp"
#include "json.hpp"

namespace forage {

std::string to_string(NodeKind k) {
    switch (k) {
    case NodeKind::Input: return "input";
    case NodeKind::Bias: return "bias";
    case NodeKind::Hidden: return "hidden";
    case NodeKind::Output: return "output";
    }
    return "hidden";
}

NodeKind node_kind_from_string(const std::string& s) {
    if (s == "input") return NodeKind::Input;
    if (s == "bias") return NodeKind::Bias;
    if (s == "hidden") return NodeKind::Hidden;
    if (s == "output") return NodeKind::Output;
    throw std::invalid_argument("unknown node kind '" + s + "'");
}

const NodeGene* Genome::find_node(int id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const NodeGene& g, int v) { return g.id < v; });
    if (it != nodes.end() && it->id == id) return &*it;
    return nullptr;
}

bool Genome::has_connection(int from, int to) const {
    for (const ConnectionGene& c : connections)
        if (c.from == from && c.to == to) return true;
    return false;
}

ConnectionGene* Genome::find_connection(int innovation) {
    auto it = std::lower_bound(
        connections.begin(), connections.end(), innovation,
        [](const ConnectionGene& g, int v) { return g.innovation < v; });
    if (it != connections.end() && it->innovation == innovation) return &*it;
    return nullptr;
}

void Genome::insert_node(NodeGene g) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), g.id,
                               [](const NodeGene& n, int v) { return n.id < v; });
    nodes.insert(it, g);
}

void Genome::insert_connection(ConnectionGene g) {
    auto it = std::lower_bound(
        connections.begin(), connections.end(), g.innovation,
        [](const ConnectionGene& c, int v) { return c.innovation < v; });
    connections.insert(it, g);
}

int Genome::count_kind(NodeKind k) const {
    int n = 0;
    for (const NodeGene& g : nodes)
        if (g.kind == k) ++n;
    return n;
}

std::vector<int> Genome::node_ids_of_kind(NodeKind k) const {
    std::vector<int> ids;
    for (const NodeGene& g : nodes)
        if (g.kind == k) ids.push_back(g.id);
    return ids; // nodes are id-sorted already
}

int Genome::max_innovation() const {
    return connections.empty() ? 0 : connections.back().innovation;
}

void validate_genome(const Genome& g) {
    std::set<int> ids;
    for (const NodeGene& n : g.nodes) {
        if (!ids.insert(n.id).second)
            throw std::invalid_argument("genome: duplicate node id " +
                                        std::to_string(n.id));
    }
    std::set<int> innovations;
    std::set<std::pair<int, int>> pairs;
    for (const ConnectionGene& c : g.connections) {
        if (!ids.count(c.from) || !ids.count(c.to))
            throw std::invalid_argument("genome: connection references missing node");
        if (!innovations.insert(c.innovation).second)
            throw std::invalid_argument("genome: duplicate innovation " +
                                        std::to_string(c.innovation));
        if (!pairs.insert({c.from, c.to}).second)
            throw std::invalid_argument("genome: duplicate connection pair");
    }
    for (std::size_t i = 1; i < g.nodes.size(); ++i)
        if (g.nodes[i - 1].id >= g.nodes[i].id)
            throw std::invalid_argument("genome: nodes not sorted by id");
    for (std::size_t i = 1; i < g.connections.size(); ++i)
        if (g.connections[i - 1].innovation >= g.connections[i].innovation)
            throw std::invalid_argument("genome: connections not sorted by innovation");
}

using nlohmann::json;

std::string genome_to_json(const Genome& g) {
    json nodes = json::array();
    for (const NodeGene& n : g.nodes)
        nodes.push_back(json{{"id", n.id}, {"kind", to_string(n.kind)}});
    json conns = json::array();
    for (const ConnectionGene& c : g.connections)
        conns.push_back(json{{"from", c.from},
                             {"to", c.to},
                             {"weight", c.weight},
                             {"enabled", c.enabled},
                             {"innovation", c.innovation}});
    json j{{"format", "forage-genome"},
           {"version", 1},
           {"nodes", std::move(nodes)},
           {"connections", std::move(conns)}};
    if (g.fitness) j["fitness"] = *g.fitness;
    return j.dump(2) + "\n";
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw std::invalid_argument("genome: unknown key '" + where + it.key() + "'");
    }
}

} // namespace

Genome genome_from_json(const std::string& text) {
    json j = json::parse(text); // parse_error carries the byte offset
    reject_unknown_keys(j, {"format", "version", "nodes", "connections", "fitness"}, "");
    if (j.value("format", "") != "forage-genome")
        throw std::invalid_argument("genome: missing format tag 'forage-genome'");
    if (j.value("version", 0) != 1)
        throw std::invalid_argument("genome: unsupported schema version");
    Genome g;
    for (const json& jn : j.at("nodes")) {
        reject_unknown_keys(jn, {"id", "kind"}, "nodes.");
        g.nodes.push_back(
            NodeGene{jn.at("id").get<int>(), node_kind_from_string(jn.at("kind"))});
    }
    for (const json& jc : j.at("connections")) {
        reject_unknown_keys(jc, {"from", "to", "weight", "enabled", "innovation"},
                            "connections.");
        g.connections.push_back(ConnectionGene{
            jc.at("from").get<int>(), jc.at("to").get<int>(),
            jc.at("weight").get<double>(), jc.at("enabled").get<bool>(),
            jc.at("innovation").get<int>()});
    }
    if (j.contains("fitness")) g.fitness = j.at("fitness").get<double>();
    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const NodeGene& a, const NodeGene& b) { return a.id < b.id; });
    std::sort(g.connections.begin(), g.connections.end(),
              [](const ConnectionGene& a, const ConnectionGene& b) {
                  return a.innovation < b.innovation;
              });
    validate_genome(g);
    return g;
}

void save_genome(const std::string& path, const Genome& g) {
    write_file(path, genome_to_json(g));
}

Genome load_genome(const std::string& path) {
    return genome_from_json(read_file(path));
}

} // namespace forage
