// Compares the serial reference path against the OpenMP path on the two
// hot workloads (generation fitness evaluation, ablation sweep) and
// checks that both produce identical results.

#include <chrono>
#include <iostream>
#include <vector>

#include "forage/ablation.hpp"
#include "forage/evolution.hpp"
#include "forage/parallel.hpp"
#include "forage/trial.hpp"

using namespace forage;
namespace chrono = std::chrono;

namespace {

double seconds_since(chrono::steady_clock::time_point t0) {
    return chrono::duration<double>(chrono::steady_clock::now() - t0).count();
}

Genome grown_genome(Rng& rng, InnovationLedger& ledger) {
    EvolutionConfig grow;
    grow.weight_mutate_rate = 1.0;
    grow.add_node_rate = 1.0;
    grow.add_connection_rate = 1.0;
    Genome g = make_seed_genome(ledger, rng);
    for (int i = 0; i < 8; ++i) g = mutate(std::move(g), ledger, grow, rng);
    return g;
}

} // namespace

int main() {
    TrialContext ctx;
    ctx.arena.trial_ticks = 2000;
    ctx.distribution = Distribution::Uniform;

    Rng rng(42);
    InnovationLedger ledger;
    std::vector<Genome> genomes;
    for (int i = 0; i < 24; ++i) genomes.push_back(grown_genome(rng, ledger));

    std::cout << "threads available: " << worker_count() << "\n\n";

    // workload 1: one generation of fitness evaluations
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::vector<double> fits_serial(genomes.size()), fits_parallel(genomes.size());
    auto eval = [&](ExecPolicy policy, std::vector<double>& out) {
        for_each_index(genomes.size(), policy,
                       [&](std::size_t i) { out[i] = fitness(genomes[i], ctx, seeds); });
    };
    auto t0 = chrono::steady_clock::now();
    eval(ExecPolicy::Serial, fits_serial);
    const double fit_serial_s = seconds_since(t0);
    t0 = chrono::steady_clock::now();
    eval(ExecPolicy::Parallel, fits_parallel);
    const double fit_parallel_s = seconds_since(t0);
    const bool fit_equal = fits_serial == fits_parallel;

    std::cout << "generation fitness (" << genomes.size() << " genomes x "
              << seeds.size() << " trials):\n"
              << "  serial   " << fit_serial_s << " s\n"
              << "  parallel " << fit_parallel_s << " s  (speedup "
              << fit_serial_s / fit_parallel_s << "x)\n"
              << "  results identical: " << (fit_equal ? "yes" : "NO") << "\n\n";

    // workload 2: full ablation sweep
    AblationParams params;
    params.seeds = {1, 2, 3, 4, 5, 6};
    TrialFn run = make_trial_runner(genomes.front(), ctx);

    auto sweep_finals = [&](ExecPolicy policy) {
        params.policy = policy;
        SweepResult sweep = ablation_sweep(run, params);
        std::vector<double> finals = final_counts(sweep.baseline);
        for (ChannelGroup g : kAllGroups) {
            std::vector<double> f = final_counts(sweep.per_group.at(g));
            finals.insert(finals.end(), f.begin(), f.end());
        }
        return finals;
    };
    t0 = chrono::steady_clock::now();
    std::vector<double> sweep_serial = sweep_finals(ExecPolicy::Serial);
    const double sweep_serial_s = seconds_since(t0);
    t0 = chrono::steady_clock::now();
    std::vector<double> sweep_parallel = sweep_finals(ExecPolicy::Parallel);
    const double sweep_parallel_s = seconds_since(t0);
    const bool sweep_equal = sweep_serial == sweep_parallel;

    std::cout << "ablation sweep (7 masks x " << params.seeds.size() << " seeds):\n"
              << "  serial   " << sweep_serial_s << " s\n"
              << "  parallel " << sweep_parallel_s << " s  (speedup "
              << sweep_serial_s / sweep_parallel_s << "x)\n"
              << "  results identical: " << (sweep_equal ? "yes" : "NO") << "\n";

    return (fit_equal && sweep_equal) ? 0 : 1;
}
