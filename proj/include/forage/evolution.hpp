#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "forage/parallel.hpp"
#include "forage/rng.hpp"
#include "forage/trial.hpp"

namespace forage {

struct EvolutionConfig {
    int population_size = 100;
    int generations = 100;
    double c1 = 1.0; // excess coefficient
    double c2 = 1.0; // disjoint coefficient
    double c3 = 0.4; // weight-difference coefficient
    double compat_threshold = 3.0;
    double weight_mutate_rate = 0.8;
    double weight_perturb_sd = 0.5;
    double add_node_rate = 0.03;
    double add_connection_rate = 0.05;
    double crossover_rate = 0.75;
    int elitism = 1; // per species
    int trial_seeds_per_eval = 3;
    Distribution distribution = Distribution::Uniform;
    int stagnation_limit = 15;

    void validate() const;
};

// Assigns innovation numbers and hidden-node ids for structural
// mutations. Persistent across the whole run, so the same (from, to)
// addition always aligns under crossover.
class InnovationLedger {
public:
    explicit InnovationLedger(int first_node_id = 0, int first_innovation = 1)
        : next_node_id_(first_node_id), next_innovation_(first_innovation) {}

    int link_innovation(int from, int to);

    struct Split {
        int node_id;
        int in_innovation;
        int out_innovation;
    };
    // `node_unused` rejects cached entries whose hidden id the caller
    // already owns (repeated splits of the same connection).
    Split split_innovation(int from, int to,
                           const std::function<bool(int)>& node_unused);

    int peek_next_innovation() const { return next_innovation_; }
    int peek_next_node_id() const { return next_node_id_; }
    void reserve_node_ids(int first_free);

    // every ledger-issued innovation with its structure, for audits
    std::vector<std::pair<int, std::pair<int, int>>> issued() const;

private:
    std::map<std::pair<int, int>, int> links_;
    std::map<std::pair<int, int>, std::vector<Split>> splits_;
    int next_node_id_;
    int next_innovation_;
};

double trial_score(long picked, long delivered); // picked + 2 * delivered

// Mean foraging score over one full unmasked trial per seed.
double fitness(const Genome& genome, const TrialContext& ctx,
               std::span<const std::uint64_t> seeds);

// delta = c1*E/N + c2*D/N + c3*meanWeightDiff, N = larger connection
// count (1 when below 20).
double compatibility(const Genome& a, const Genome& b,
                     const EvolutionConfig& config);

Genome mutate(Genome genome, InnovationLedger& ledger,
              const EvolutionConfig& config, Rng& rng);

// Matching genes from a random parent, disjoint/excess from the fitter.
Genome crossover(const Genome& fit_parent, const Genome& other, Rng& rng);

// Fully connected (inputs + optional bias) -> outputs, uniform weights
// in [-1, 1], innovations from the ledger in fixed order.
Genome make_seed_genome(InnovationLedger& ledger, Rng& rng, int inputs = 15,
                        int outputs = 3, bool with_bias = true);

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    int species_count = 0;
};

struct EvolveResult {
    Genome champion; // highest raw fitness ever seen
    std::vector<GenerationStats> log;
    double initial_best = 0.0; // best fitness of the random population
    int extinction_restarts = 0;
};

// Test/audit hook: species membership per generation (indices into the
// population) after speciation.
using GenerationObserver =
    std::function<void(int generation, const std::vector<std::vector<int>>& species_members,
                       const InnovationLedger& ledger)>;

EvolveResult evolve(const EvolutionConfig& config, const TrialContext& ctx,
                    std::uint64_t master_seed,
                    ExecPolicy policy = ExecPolicy::Parallel,
                    const GenerationObserver& observer = {});

std::string generation_log_csv(std::span<const GenerationStats> log);

} // namespace forage
