#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "forage/parallel.hpp"
#include "forage/trial.hpp"

namespace forage {

struct AblationParams {
    std::vector<std::uint64_t> seeds;
    double alpha = 0.05;
    double min_rel_drop = 0.2;
    std::array<double, kGroupCount> replacement{}; // per-group constant
    ExecPolicy policy = ExecPolicy::Parallel;
};

struct SweepResult {
    std::vector<EfficiencyCurve> baseline; // one per seed, all groups enabled
    std::map<ChannelGroup, std::vector<EfficiencyCurve>> per_group;
};

// One baseline trial per seed plus one trial per (group, seed) with only
// that group disabled; all trials seed-paired with the baseline.
SweepResult ablation_sweep(const TrialFn& run, const AblationParams& params);

std::vector<double> final_counts(std::span<const EfficiencyCurve> curves);

// Per-pair relative drop (b - v) / max(b, 1); the max(.,1) keeps the
// ratio defined when a baseline trial delivered nothing.
double pair_relative_drop(double baseline, double variant);
double median_relative_drop(std::span<const double> baseline,
                            std::span<const double> variant);

// True iff the median seed-paired relative drop reaches min_rel_drop AND
// a two-sided Mann-Whitney U rejects equality at alpha. Requires n >= 5
// seed-paired samples (throws std::invalid_argument below that).
bool significant_drop(std::span<const double> baseline_finals,
                      std::span<const double> variant_finals, double alpha = 0.05,
                      double min_rel_drop = 0.2);

// Direction-free variant used for the add-one probes.
bool significant_change(std::span<const double> baseline_finals,
                        std::span<const double> variant_finals, double alpha = 0.05,
                        double min_rel_change = 0.2);

enum class Verdict { SufficientAndMinimal, NotSufficient, NotMinimal };
std::string to_string(Verdict v);

struct GroupOutcome {
    std::vector<double> finals;
    double median_rel_change = 0.0; // drop for removals, |change| for additions
    bool significant = false;
};

struct MinimalSetReport {
    std::set<ChannelGroup> candidate_set;
    std::vector<double> baseline_finals;
    std::map<ChannelGroup, GroupOutcome> remove_one; // keys = candidate set
    std::map<ChannelGroup, GroupOutcome> add_one;    // keys = complement
    Verdict verdict = Verdict::NotSufficient;
    bool search_failed = false; // greedy search exhausted its candidates
};

// Baseline enables exactly the candidate set (complement disabled with
// the configured constants). Verdict: any addition that significantly
// changes finals -> NotSufficient; else any removal without a
// significant drop -> NotMinimal; else SufficientAndMinimal.
MinimalSetReport minimal_set_check(const TrialFn& run,
                                   const std::set<ChannelGroup>& candidate_set,
                                   const AblationParams& params);

// Backward elimination from the full set: repeatedly drop the group
// whose removal changes finals least until every removal is a
// significant drop, then verify with minimal_set_check. A controller
// insensitive to every input bottoms out at a singleton and is reported
// as a NotSufficient failure.
MinimalSetReport greedy_minimal_search(const TrialFn& run,
                                       const AblationParams& params);

std::string report_to_json(const MinimalSetReport& report);

} // namespace forage
