#pragma once

#include <span>
#include <vector>

#include "forage/genome.hpp"

namespace forage {

// Recurrent state: one activation per non-input node, persisted across
// control ticks within a trial, 0.5 everywhere at trial start (the
// sigmoid's zero-input fixed point). Slot order follows the compiled
// network of the genome it was created for.
struct NetworkState {
    std::vector<double> activations;
    std::vector<double> scratch; // evaluation buffer, no semantics
};

// Flattened evaluator for a fixed genome. Cycles are legal: each call
// runs `passes` synchronous update rounds; every non-input node reads
// the previous round's activations, inputs are clamped to the supplied
// vector and the bias node to 1.
class Network {
public:
    explicit Network(const Genome& genome, double sigmoid_slope = 4.9);

    int input_count() const { return static_cast<int>(input_slots_.size()); }
    int output_count() const { return static_cast<int>(output_slots_.size()); }
    double sigmoid_slope() const { return slope_; }

    NetworkState initial_state() const;

    // outputs.size() must equal output_count(); passes >= 1
    void evaluate_into(NetworkState& state, std::span<const double> inputs,
                       int passes, std::span<double> outputs) const;

    std::vector<double> evaluate(NetworkState& state,
                                 std::span<const double> inputs,
                                 int passes) const;

private:
    struct Edge {
        int src_slot;
        double weight;
    };
    struct Slot {
        int node_id;
        NodeKind kind;
        int edge_begin;
        int edge_end;
    };

    std::vector<Slot> slots_;       // genome node order (ascending id)
    std::vector<Edge> edges_;       // grouped by destination slot
    std::vector<int> input_slots_;  // ascending node id
    std::vector<int> output_slots_; // ascending node id
    int bias_slot_ = -1;
    double slope_ = 4.9;
};

// Convenience form matching the one-shot contract; compiles per call.
std::vector<double> evaluate(const Genome& genome, NetworkState& state,
                             std::span<const double> inputs, int passes,
                             double sigmoid_slope = 4.9);

} // namespace forage
