#include "forage/network.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace forage {

Network::Network(const Genome& genome, double sigmoid_slope)
    : slope_(sigmoid_slope) {
    if (!(sigmoid_slope > 0.0))
        throw std::invalid_argument("network: sigmoid slope must be > 0");

    std::unordered_map<int, int> slot_of;
    slot_of.reserve(genome.nodes.size());
    slots_.reserve(genome.nodes.size());
    for (const NodeGene& n : genome.nodes) {
        int slot = static_cast<int>(slots_.size());
        slot_of[n.id] = slot;
        slots_.push_back(Slot{n.id, n.kind, 0, 0});
        switch (n.kind) {
        case NodeKind::Input: input_slots_.push_back(slot); break;
        case NodeKind::Output: output_slots_.push_back(slot); break;
        case NodeKind::Bias:
            if (bias_slot_ >= 0)
                throw std::invalid_argument("network: more than one bias node");
            bias_slot_ = slot;
            break;
        case NodeKind::Hidden: break;
        }
    }

    // incoming edge lists grouped by destination slot
    std::vector<std::vector<Edge>> incoming(slots_.size());
    for (const ConnectionGene& c : genome.connections) {
        if (!c.enabled) continue;
        auto from = slot_of.find(c.from);
        auto to = slot_of.find(c.to);
        if (from == slot_of.end() || to == slot_of.end())
            throw std::invalid_argument("network: connection references missing node");
        incoming[static_cast<std::size_t>(to->second)].push_back(
            Edge{from->second, c.weight});
    }
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        slots_[i].edge_begin = static_cast<int>(edges_.size());
        for (const Edge& e : incoming[i]) edges_.push_back(e);
        slots_[i].edge_end = static_cast<int>(edges_.size());
    }
}

NetworkState Network::initial_state() const {
    NetworkState state;
    state.activations.assign(slots_.size(), 0.5);
    state.scratch.assign(slots_.size(), 0.0);
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (slots_[i].kind == NodeKind::Input) state.activations[i] = 0.0;
        if (slots_[i].kind == NodeKind::Bias) state.activations[i] = 1.0;
    }
    return state;
}

void Network::evaluate_into(NetworkState& state, std::span<const double> inputs,
                            int passes, std::span<double> outputs) const {
    if (inputs.size() != input_slots_.size())
        throw std::invalid_argument("network: input length mismatch");
    if (outputs.size() != output_slots_.size())
        throw std::invalid_argument("network: output length mismatch");
    if (passes < 1) throw std::invalid_argument("network: passes must be >= 1");
    if (state.activations.size() != slots_.size())
        throw std::invalid_argument("network: state does not match this network");

    std::vector<double>& prev = state.activations;
    std::vector<double>& next = state.scratch;
    next.resize(slots_.size());

    for (std::size_t i = 0; i < input_slots_.size(); ++i)
        prev[static_cast<std::size_t>(input_slots_[i])] = inputs[i];
    if (bias_slot_ >= 0) prev[static_cast<std::size_t>(bias_slot_)] = 1.0;

    for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t s = 0; s < slots_.size(); ++s) {
            const Slot& slot = slots_[s];
            if (slot.kind == NodeKind::Input || slot.kind == NodeKind::Bias) {
                next[s] = prev[s];
                continue;
            }
            double sum = 0.0;
            for (int e = slot.edge_begin; e < slot.edge_end; ++e)
                sum += edges_[static_cast<std::size_t>(e)].weight *
                       prev[static_cast<std::size_t>(edges_[static_cast<std::size_t>(e)].src_slot)];
            next[s] = 1.0 / (1.0 + std::exp(-slope_ * sum));
        }
        prev.swap(next);
    }

    for (std::size_t i = 0; i < output_slots_.size(); ++i)
        outputs[i] = prev[static_cast<std::size_t>(output_slots_[i])];
}

std::vector<double> Network::evaluate(NetworkState& state,
                                      std::span<const double> inputs,
                                      int passes) const {
    std::vector<double> outputs(output_slots_.size());
    evaluate_into(state, inputs, passes, outputs);
    return outputs;
}

std::vector<double> evaluate(const Genome& genome, NetworkState& state,
                             std::span<const double> inputs, int passes,
                             double sigmoid_slope) {
    Network net(genome, sigmoid_slope);
    if (state.activations.empty()) state = net.initial_state();
    return net.evaluate(state, inputs, passes);
}

} // namespace forage
