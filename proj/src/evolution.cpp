#include "forage/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "forage/textio.hpp"

namespace forage {

void EvolutionConfig::validate() const {
    auto rate = [](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string("evolution: ") + name +
                                        " must be in [0,1]");
    };
    rate(weight_mutate_rate, "weight_mutate_rate");
    rate(add_node_rate, "add_node_rate");
    rate(add_connection_rate, "add_connection_rate");
    rate(crossover_rate, "crossover_rate");
    if (population_size < 2)
        throw std::invalid_argument("evolution: population_size must be >= 2");
    if (generations < 0)
        throw std::invalid_argument("evolution: generations must be >= 0");
    if (!(compat_threshold > 0.0))
        throw std::invalid_argument("evolution: compat_threshold must be > 0");
    if (c1 < 0.0 || c2 < 0.0 || c3 < 0.0)
        throw std::invalid_argument("evolution: compatibility coefficients must be >= 0");
    if (weight_perturb_sd < 0.0)
        throw std::invalid_argument("evolution: weight_perturb_sd must be >= 0");
    if (elitism < 0) throw std::invalid_argument("evolution: elitism must be >= 0");
    if (trial_seeds_per_eval < 1)
        throw std::invalid_argument("evolution: trial_seeds_per_eval must be >= 1");
    if (stagnation_limit < 1)
        throw std::invalid_argument("evolution: stagnation_limit must be >= 1");
}

// -- innovation ledger ---------------------------------------------------

int InnovationLedger::link_innovation(int from, int to) {
    auto [it, inserted] = links_.try_emplace({from, to}, next_innovation_);
    if (inserted) ++next_innovation_;
    return it->second;
}

InnovationLedger::Split InnovationLedger::split_innovation(
    int from, int to, const std::function<bool(int)>& node_unused) {
    std::vector<Split>& entries = splits_[{from, to}];
    for (const Split& s : entries)
        if (node_unused(s.node_id)) return s;
    Split s{next_node_id_++, next_innovation_, next_innovation_ + 1};
    next_innovation_ += 2;
    entries.push_back(s);
    return s;
}

void InnovationLedger::reserve_node_ids(int first_free) {
    next_node_id_ = std::max(next_node_id_, first_free);
}

std::vector<std::pair<int, std::pair<int, int>>> InnovationLedger::issued() const {
    std::vector<std::pair<int, std::pair<int, int>>> out;
    for (const auto& [pair, innovation] : links_)
        out.emplace_back(innovation, pair);
    for (const auto& [pair, entries] : splits_) {
        for (const Split& s : entries) {
            out.emplace_back(s.in_innovation, std::make_pair(pair.first, s.node_id));
            out.emplace_back(s.out_innovation, std::make_pair(s.node_id, pair.second));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// -- fitness --------------------------------------------------------------

double trial_score(long picked, long delivered) {
    return static_cast<double>(picked) + 2.0 * static_cast<double>(delivered);
}

double fitness(const Genome& genome, const TrialContext& ctx,
               std::span<const std::uint64_t> seeds) {
    if (seeds.empty()) throw std::invalid_argument("fitness: seeds must be non-empty");
    Network net(genome, ctx.controller.sigmoid_slope);
    double total = 0.0;
    for (std::uint64_t seed : seeds) {
        EfficiencyCurve curve =
            run_trial(net, AblationMask::all_enabled(), seed, ctx);
        total += trial_score(curve.final_picked, curve.final_count);
    }
    return total / static_cast<double>(seeds.size());
}

// -- compatibility ----------------------------------------------------------

double compatibility(const Genome& a, const Genome& b,
                     const EvolutionConfig& config) {
    const auto& ca = a.connections;
    const auto& cb = b.connections;
    const int max_a = a.max_innovation();
    const int max_b = b.max_innovation();
    const int shared_limit = std::min(max_a, max_b);

    std::size_t i = 0, j = 0;
    int matching = 0, disjoint = 0, excess = 0;
    double weight_diff = 0.0;
    while (i < ca.size() || j < cb.size()) {
        if (i < ca.size() && j < cb.size() &&
            ca[i].innovation == cb[j].innovation) {
            weight_diff += std::abs(ca[i].weight - cb[j].weight);
            ++matching;
            ++i;
            ++j;
        } else if (j >= cb.size() ||
                   (i < ca.size() && ca[i].innovation < cb[j].innovation)) {
            (ca[i].innovation > shared_limit ? excess : disjoint) += 1;
            ++i;
        } else {
            (cb[j].innovation > shared_limit ? excess : disjoint) += 1;
            ++j;
        }
    }

    double n = static_cast<double>(std::max(ca.size(), cb.size()));
    if (n < 20.0) n = 1.0;
    if (n == 0.0) n = 1.0;
    const double mean_weight_diff =
        matching > 0 ? weight_diff / static_cast<double>(matching) : 0.0;
    return config.c1 * excess / n + config.c2 * disjoint / n +
           config.c3 * mean_weight_diff;
}

// -- operators ----------------------------------------------------------------

Genome make_seed_genome(InnovationLedger& ledger, Rng& rng, int inputs,
                        int outputs, bool with_bias) {
    Genome g;
    int id = 0;
    for (int i = 0; i < inputs; ++i) g.nodes.push_back({id++, NodeKind::Input});
    if (with_bias) g.nodes.push_back({id++, NodeKind::Bias});
    const int first_output = id;
    for (int o = 0; o < outputs; ++o) g.nodes.push_back({id++, NodeKind::Output});
    ledger.reserve_node_ids(id);

    for (int o = 0; o < outputs; ++o) {
        for (int f = 0; f < first_output; ++f) {
            ConnectionGene c;
            c.from = f;
            c.to = first_output + o;
            c.weight = rng.uniform(-1.0, 1.0);
            c.enabled = true;
            c.innovation = ledger.link_innovation(c.from, c.to);
            g.insert_connection(c);
        }
    }
    return g;
}

Genome mutate(Genome genome, InnovationLedger& ledger,
              const EvolutionConfig& config, Rng& rng) {
    genome.fitness.reset();

    for (ConnectionGene& c : genome.connections) {
        if (rng.chance(config.weight_mutate_rate))
            c.weight += rng.gaussian(0.0, config.weight_perturb_sd);
    }

    if (rng.chance(config.add_node_rate)) {
        std::vector<std::size_t> enabled;
        for (std::size_t i = 0; i < genome.connections.size(); ++i)
            if (genome.connections[i].enabled) enabled.push_back(i);
        if (!enabled.empty()) {
            std::size_t pick = enabled[rng.next_index(enabled.size())];
            ConnectionGene& old = genome.connections[pick];
            InnovationLedger::Split split = ledger.split_innovation(
                old.from, old.to, [&](int id) { return !genome.has_node(id); });
            old.enabled = false;
            const int from = old.from, to = old.to;
            const double weight = old.weight;
            genome.insert_node({split.node_id, NodeKind::Hidden});
            genome.insert_connection(
                {from, split.node_id, 1.0, true, split.in_innovation});
            genome.insert_connection(
                {split.node_id, to, weight, true, split.out_innovation});
        }
    }

    if (rng.chance(config.add_connection_rate)) {
        // exact free-pair enumeration: uniform choice, and a genuine
        // no-op on a fully connected genome
        std::vector<std::pair<int, int>> free_pairs;
        for (const NodeGene& from : genome.nodes) {
            for (const NodeGene& to : genome.nodes) {
                if (to.kind == NodeKind::Input || to.kind == NodeKind::Bias) continue;
                if (!genome.has_connection(from.id, to.id))
                    free_pairs.emplace_back(from.id, to.id);
            }
        }
        if (!free_pairs.empty()) {
            auto [from, to] = free_pairs[rng.next_index(free_pairs.size())];
            ConnectionGene c{from, to, rng.uniform(-1.0, 1.0), true,
                             ledger.link_innovation(from, to)};
            genome.insert_connection(c);
        }
    }

    return genome;
}

Genome crossover(const Genome& fit_parent, const Genome& other, Rng& rng) {
    Genome child;
    const auto& ca = fit_parent.connections;
    const auto& cb = other.connections;
    std::size_t i = 0, j = 0;
    while (i < ca.size() || j < cb.size()) {
        if (i < ca.size() && j < cb.size() &&
            ca[i].innovation == cb[j].innovation) {
            child.connections.push_back(rng.chance(0.5) ? ca[i] : cb[j]);
            ++i;
            ++j;
        } else if (j >= cb.size() ||
                   (i < ca.size() && ca[i].innovation < cb[j].innovation)) {
            child.connections.push_back(ca[i]); // fitter parent keeps its genes
            ++i;
        } else {
            ++j; // disjoint/excess of the weaker parent is dropped
        }
    }

    // fixed interface nodes plus everything the connections reference
    auto node_kind = [&](int id) -> NodeGene {
        if (const NodeGene* n = fit_parent.find_node(id)) return *n;
        if (const NodeGene* n = other.find_node(id)) return *n;
        throw std::logic_error("crossover: node not found in either parent");
    };
    for (const NodeGene& n : fit_parent.nodes)
        if (n.kind != NodeKind::Hidden) child.insert_node(n);
    for (const ConnectionGene& c : child.connections) {
        if (!child.has_node(c.from)) child.insert_node(node_kind(c.from));
        if (!child.has_node(c.to)) child.insert_node(node_kind(c.to));
    }
    return child;
}

// -- the generational loop ------------------------------------------------

namespace {

constexpr std::uint64_t kTrialStream = 0x7431a15eedULL;

struct SpeciesSlot {
    Genome representative;
    std::vector<int> members;
    int staleness = 0;
    double best_fitness = -1.0;
};

std::vector<std::uint64_t> eval_seeds(std::uint64_t master_seed, int generation,
                                      int genome_index, int count) {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        seeds[static_cast<std::size_t>(k)] =
            derive_seed(master_seed, {kTrialStream, static_cast<std::uint64_t>(generation),
                                      static_cast<std::uint64_t>(genome_index),
                                      static_cast<std::uint64_t>(k)});
    return seeds;
}

} // namespace

EvolveResult evolve(const EvolutionConfig& config, const TrialContext& ctx,
                    std::uint64_t master_seed, ExecPolicy policy,
                    const GenerationObserver& observer) {
    config.validate();
    ctx.arena.validate();
    ctx.controller.validate();
    TrialContext trial_ctx = ctx;
    trial_ctx.distribution = config.distribution;

    Rng rng(derive_seed(master_seed, {0xe7011eULL}));
    InnovationLedger ledger;

    std::vector<Genome> population;
    population.reserve(static_cast<std::size_t>(config.population_size));
    for (int i = 0; i < config.population_size; ++i)
        population.push_back(
            make_seed_genome(ledger, rng, 15, 3, ctx.controller.use_bias));

    std::vector<SpeciesSlot> species;
    EvolveResult result;
    double best_ever = -1.0;

    for (int gen = 0; gen <= config.generations; ++gen) {
        // fitness evaluation: the only parallel section; results land in
        // index-addressed slots so scheduling cannot change them
        std::vector<double> fits(population.size(), 0.0);
        for_each_index(population.size(), policy, [&](std::size_t i) {
            const std::vector<std::uint64_t> seeds = eval_seeds(
                master_seed, gen, static_cast<int>(i), config.trial_seeds_per_eval);
            fits[i] = fitness(population[i], trial_ctx, seeds);
        });
        for (std::size_t i = 0; i < population.size(); ++i)
            population[i].fitness = fits[i];

        double best_gen = -1.0, sum = 0.0;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < population.size(); ++i) {
            sum += fits[i];
            if (fits[i] > best_gen) {
                best_gen = fits[i];
                best_idx = i;
            }
        }
        if (gen == 0) result.initial_best = best_gen;
        if (best_gen > best_ever) {
            best_ever = best_gen;
            result.champion = population[best_idx];
        }

        // speciation against previous-generation representatives
        for (SpeciesSlot& s : species) s.members.clear();
        for (std::size_t i = 0; i < population.size(); ++i) {
            bool placed = false;
            for (SpeciesSlot& s : species) {
                if (compatibility(population[i], s.representative, config) <
                    config.compat_threshold) {
                    s.members.push_back(static_cast<int>(i));
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                SpeciesSlot fresh;
                fresh.representative = population[i];
                fresh.members.push_back(static_cast<int>(i));
                species.push_back(std::move(fresh));
            }
        }
        std::erase_if(species, [](const SpeciesSlot& s) { return s.members.empty(); });

        if (observer) {
            std::vector<std::vector<int>> membership;
            membership.reserve(species.size());
            for (const SpeciesSlot& s : species) membership.push_back(s.members);
            observer(gen, membership, ledger);
        }

        result.log.push_back(GenerationStats{gen, best_gen,
                                             sum / static_cast<double>(population.size()),
                                             static_cast<int>(species.size())});

        if (gen == config.generations) break;

        // stagnation bookkeeping, then cull; the species holding the
        // generation best is always protected
        for (SpeciesSlot& s : species) {
            double species_best = -1.0;
            for (int m : s.members) species_best = std::max(species_best, fits[static_cast<std::size_t>(m)]);
            if (species_best > s.best_fitness) {
                s.best_fitness = species_best;
                s.staleness = 0;
            } else {
                s.staleness += 1;
            }
        }
        std::erase_if(species, [&](const SpeciesSlot& s) {
            if (std::find(s.members.begin(), s.members.end(),
                          static_cast<int>(best_idx)) != s.members.end())
                return false;
            return s.staleness >= config.stagnation_limit;
        });

        if (species.empty()) {
            // total extinction: restart from the champion
            std::cerr << "evolve: all species extinct at generation " << gen
                      << ", restarting from champion\n";
            result.extinction_restarts += 1;
            std::vector<Genome> restart;
            restart.reserve(population.size());
            restart.push_back(result.champion);
            while (restart.size() < population.size())
                restart.push_back(mutate(result.champion, ledger, config, rng));
            population = std::move(restart);
            continue;
        }

        // offspring proportional to species mean raw fitness (the sum of
        // members' fitness after dividing each by the species size)
        std::vector<double> weights(species.size(), 0.0);
        double weight_total = 0.0;
        for (std::size_t k = 0; k < species.size(); ++k) {
            double shared_sum = 0.0;
            for (int m : species[k].members)
                shared_sum += fits[static_cast<std::size_t>(m)] /
                              static_cast<double>(species[k].members.size());
            weights[k] = shared_sum;
            weight_total += shared_sum;
        }

        std::vector<int> quota(species.size(), 0);
        if (weight_total <= 0.0) {
            for (std::size_t k = 0; k < species.size(); ++k)
                quota[k] = config.population_size / static_cast<int>(species.size());
        } else {
            for (std::size_t k = 0; k < species.size(); ++k)
                quota[k] = static_cast<int>(std::floor(
                    weights[k] / weight_total * config.population_size));
        }
        int allocated = 0;
        for (int q : quota) allocated += q;
        // distribute the remainder by largest fractional share
        std::vector<std::size_t> order(species.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            double fa = weight_total > 0.0
                            ? weights[a] / weight_total * config.population_size - quota[a]
                            : 0.0;
            double fb = weight_total > 0.0
                            ? weights[b] / weight_total * config.population_size - quota[b]
                            : 0.0;
            return fa > fb;
        });
        for (std::size_t k = 0; allocated < config.population_size; ++k) {
            quota[order[k % order.size()]] += 1;
            ++allocated;
        }

        // next-generation representatives come from this generation
        for (SpeciesSlot& s : species) {
            int pick = s.members[rng.next_index(s.members.size())];
            s.representative = population[static_cast<std::size_t>(pick)];
        }

        std::vector<Genome> next;
        next.reserve(static_cast<std::size_t>(config.population_size));
        for (std::size_t k = 0; k < species.size(); ++k) {
            if (quota[k] == 0) continue;
            std::vector<int> ranked = species[k].members;
            std::stable_sort(ranked.begin(), ranked.end(), [&](int a, int b) {
                return fits[static_cast<std::size_t>(a)] > fits[static_cast<std::size_t>(b)];
            });
            const std::size_t survivors =
                std::max<std::size_t>(1, (ranked.size() + 1) / 2);

            int produced = 0;
            for (int e = 0; e < config.elitism && produced < quota[k] &&
                            e < static_cast<int>(ranked.size());
                 ++e, ++produced)
                next.push_back(population[static_cast<std::size_t>(ranked[static_cast<std::size_t>(e)])]);

            while (produced < quota[k]) {
                const bool cross =
                    survivors >= 2 && rng.chance(config.crossover_rate);
                if (cross) {
                    int a = ranked[rng.next_index(survivors)];
                    int b = ranked[rng.next_index(survivors)];
                    if (fits[static_cast<std::size_t>(b)] > fits[static_cast<std::size_t>(a)])
                        std::swap(a, b);
                    Genome child = crossover(population[static_cast<std::size_t>(a)],
                                             population[static_cast<std::size_t>(b)], rng);
                    next.push_back(mutate(std::move(child), ledger, config, rng));
                } else {
                    int a = ranked[rng.next_index(survivors)];
                    next.push_back(mutate(population[static_cast<std::size_t>(a)],
                                          ledger, config, rng));
                }
                ++produced;
            }
        }
        population = std::move(next);
    }

    return result;
}

std::string generation_log_csv(std::span<const GenerationStats> log) {
    std::ostringstream out;
    out << "generation,best_fitness,mean_fitness,species_count\n";
    for (const GenerationStats& row : log) {
        out << row.generation << ',' << fmt_double(row.best_fitness) << ','
            << fmt_double(row.mean_fitness) << ',' << row.species_count << '\n';
    }
    return out.str();
}

} // namespace forage
