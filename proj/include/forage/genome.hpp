#pragma once

#include <optional>
#include <string>
#include <vector>

namespace forage {

enum class NodeKind { Input, Bias, Hidden, Output };

std::string to_string(NodeKind k);
NodeKind node_kind_from_string(const std::string& s);

struct NodeGene {
    int id = 0;
    NodeKind kind = NodeKind::Hidden;
};

struct ConnectionGene {
    int from = 0;
    int to = 0;
    double weight = 0.0;
    bool enabled = true;
    int innovation = 0;
};

// Node list kept sorted by id, connections by innovation number, so a
// genome has exactly one byte representation.
struct Genome {
    std::vector<NodeGene> nodes;
    std::vector<ConnectionGene> connections;
    std::optional<double> fitness;

    const NodeGene* find_node(int id) const;
    bool has_node(int id) const { return find_node(id) != nullptr; }
    bool has_connection(int from, int to) const; // enabled or not
    ConnectionGene* find_connection(int innovation);

    void insert_node(NodeGene g);
    void insert_connection(ConnectionGene g);

    int count_kind(NodeKind k) const;
    std::vector<int> node_ids_of_kind(NodeKind k) const; // ascending
    int max_innovation() const;
};

// Checks id uniqueness, connection endpoints, one connection per
// (from, to) pair, innovation uniqueness. Throws std::invalid_argument.
void validate_genome(const Genome& g);

std::string genome_to_json(const Genome& g);
Genome genome_from_json(const std::string& text); // strict, validated

void save_genome(const std::string& path, const Genome& g);
Genome load_genome(const std::string& path);

} // namespace forage
