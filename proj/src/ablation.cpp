#include "forage/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "forage/stats.hpp"
#include "json.hpp"

namespace forage {

namespace {

AblationMask mask_for_enabled(const std::set<ChannelGroup>& enabled,
                              const std::array<double, kGroupCount>& replacement) {
    AblationMask mask;
    for (ChannelGroup g : kAllGroups) {
        if (!enabled.count(g))
            mask.disable(g, replacement[static_cast<std::size_t>(g)]);
    }
    return mask;
}

// run one batch of (mask, seed) jobs; slot-addressed writes keep the
// result independent of scheduling
std::vector<EfficiencyCurve> run_batch(const TrialFn& run,
                                       const std::vector<AblationMask>& masks,
                                       std::span<const std::uint64_t> seeds,
                                       ExecPolicy policy) {
    const std::size_t n = masks.size() * seeds.size();
    std::vector<EfficiencyCurve> out(n);
    for_each_index(n, policy, [&](std::size_t i) {
        const std::size_t mask_idx = i / seeds.size();
        const std::size_t seed_idx = i % seeds.size();
        out[i] = run(masks[mask_idx], seeds[seed_idx]);
    });
    return out;
}

} // namespace

std::vector<double> final_counts(std::span<const EfficiencyCurve> curves) {
    std::vector<double> finals;
    finals.reserve(curves.size());
    for (const EfficiencyCurve& c : curves)
        finals.push_back(static_cast<double>(c.final_count));
    return finals;
}

SweepResult ablation_sweep(const TrialFn& run, const AblationParams& params) {
    if (params.seeds.empty())
        throw std::invalid_argument("ablation_sweep: at least one seed required");

    std::vector<AblationMask> masks;
    masks.push_back(AblationMask::all_enabled());
    for (ChannelGroup g : kAllGroups) {
        AblationMask m;
        m.disable(g, params.replacement[static_cast<std::size_t>(g)]);
        masks.push_back(m);
    }

    std::vector<EfficiencyCurve> curves =
        run_batch(run, masks, params.seeds, params.policy);

    SweepResult result;
    const std::size_t ns = params.seeds.size();
    result.baseline.assign(curves.begin(), curves.begin() + static_cast<long>(ns));
    for (int g = 0; g < kGroupCount; ++g) {
        auto begin = curves.begin() + static_cast<long>((g + 1) * ns);
        result.per_group[static_cast<ChannelGroup>(g)] =
            std::vector<EfficiencyCurve>(begin, begin + static_cast<long>(ns));
    }
    return result;
}

double pair_relative_drop(double baseline, double variant) {
    return (baseline - variant) / std::max(baseline, 1.0);
}

double median_relative_drop(std::span<const double> baseline,
                            std::span<const double> variant) {
    if (baseline.size() != variant.size() || baseline.empty())
        throw std::invalid_argument("median_relative_drop: mismatched samples");
    std::vector<double> drops(baseline.size());
    for (std::size_t i = 0; i < baseline.size(); ++i)
        drops[i] = pair_relative_drop(baseline[i], variant[i]);
    return median(drops);
}

namespace {

void require_paired(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("significance test: samples must be seed-paired");
    if (a.size() < 5)
        throw std::invalid_argument("significance test: need at least 5 samples");
}

} // namespace

bool significant_drop(std::span<const double> baseline_finals,
                      std::span<const double> variant_finals, double alpha,
                      double min_rel_drop) {
    require_paired(baseline_finals, variant_finals);
    const double drop = median_relative_drop(baseline_finals, variant_finals);
    if (drop < min_rel_drop) return false;
    const MannWhitneyResult mw = mann_whitney_u(baseline_finals, variant_finals);
    return mw.p_value < alpha;
}

bool significant_change(std::span<const double> baseline_finals,
                        std::span<const double> variant_finals, double alpha,
                        double min_rel_change) {
    require_paired(baseline_finals, variant_finals);
    const double change =
        std::abs(median_relative_drop(baseline_finals, variant_finals));
    if (change < min_rel_change) return false;
    const MannWhitneyResult mw = mann_whitney_u(baseline_finals, variant_finals);
    return mw.p_value < alpha;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::SufficientAndMinimal: return "sufficient_and_minimal";
    case Verdict::NotSufficient: return "not_sufficient";
    case Verdict::NotMinimal: return "not_minimal";
    }
    return "not_sufficient";
}

MinimalSetReport minimal_set_check(const TrialFn& run,
                                   const std::set<ChannelGroup>& candidate_set,
                                   const AblationParams& params) {
    if (candidate_set.empty())
        throw std::invalid_argument("minimal_set_check: candidate set is empty");
    if (params.seeds.empty())
        throw std::invalid_argument("minimal_set_check: at least one seed required");

    std::vector<AblationMask> masks;
    masks.push_back(mask_for_enabled(candidate_set, params.replacement));

    std::vector<ChannelGroup> removals(candidate_set.begin(), candidate_set.end());
    for (ChannelGroup g : removals) {
        std::set<ChannelGroup> enabled = candidate_set;
        enabled.erase(g);
        masks.push_back(mask_for_enabled(enabled, params.replacement));
    }
    std::vector<ChannelGroup> additions;
    for (ChannelGroup g : kAllGroups)
        if (!candidate_set.count(g)) additions.push_back(g);
    for (ChannelGroup g : additions) {
        std::set<ChannelGroup> enabled = candidate_set;
        enabled.insert(g);
        masks.push_back(mask_for_enabled(enabled, params.replacement));
    }

    std::vector<EfficiencyCurve> curves =
        run_batch(run, masks, params.seeds, params.policy);
    const std::size_t ns = params.seeds.size();
    auto finals_of = [&](std::size_t mask_idx) {
        std::span<const EfficiencyCurve> span(curves.data() + mask_idx * ns, ns);
        return final_counts(span);
    };

    MinimalSetReport report;
    report.candidate_set = candidate_set;
    report.baseline_finals = finals_of(0);

    bool every_removal_drops = true;
    for (std::size_t i = 0; i < removals.size(); ++i) {
        GroupOutcome outcome;
        outcome.finals = finals_of(1 + i);
        outcome.median_rel_change =
            median_relative_drop(report.baseline_finals, outcome.finals);
        outcome.significant =
            significant_drop(report.baseline_finals, outcome.finals, params.alpha,
                             params.min_rel_drop);
        every_removal_drops = every_removal_drops && outcome.significant;
        report.remove_one[removals[i]] = std::move(outcome);
    }
    bool any_addition_changes = false;
    for (std::size_t i = 0; i < additions.size(); ++i) {
        GroupOutcome outcome;
        outcome.finals = finals_of(1 + removals.size() + i);
        outcome.median_rel_change = std::abs(
            median_relative_drop(report.baseline_finals, outcome.finals));
        outcome.significant =
            significant_change(report.baseline_finals, outcome.finals, params.alpha,
                               params.min_rel_drop);
        any_addition_changes = any_addition_changes || outcome.significant;
        report.add_one[additions[i]] = std::move(outcome);
    }

    if (any_addition_changes)
        report.verdict = Verdict::NotSufficient;
    else if (!every_removal_drops)
        report.verdict = Verdict::NotMinimal;
    else
        report.verdict = Verdict::SufficientAndMinimal;
    return report;
}

MinimalSetReport greedy_minimal_search(const TrialFn& run,
                                       const AblationParams& params) {
    std::set<ChannelGroup> current(kAllGroups.begin(), kAllGroups.end());

    while (true) {
        // removal probe for the current set
        std::vector<AblationMask> masks;
        masks.push_back(mask_for_enabled(current, params.replacement));
        std::vector<ChannelGroup> members(current.begin(), current.end());
        for (ChannelGroup g : members) {
            std::set<ChannelGroup> enabled = current;
            enabled.erase(g);
            masks.push_back(mask_for_enabled(enabled, params.replacement));
        }
        std::vector<EfficiencyCurve> curves =
            run_batch(run, masks, params.seeds, params.policy);
        const std::size_t ns = params.seeds.size();
        auto finals_of = [&](std::size_t mask_idx) {
            std::span<const EfficiencyCurve> span(curves.data() + mask_idx * ns, ns);
            return final_counts(span);
        };
        const std::vector<double> baseline = finals_of(0);

        bool all_significant = true;
        double least_impact = 0.0;
        int least_idx = -1;
        for (std::size_t i = 0; i < members.size(); ++i) {
            const std::vector<double> variant = finals_of(1 + i);
            const bool sig = significant_drop(baseline, variant, params.alpha,
                                              params.min_rel_drop);
            const double impact =
                std::abs(median_relative_drop(baseline, variant));
            if (!sig && (least_idx < 0 || impact < least_impact)) {
                least_impact = impact;
                least_idx = static_cast<int>(i);
            }
            all_significant = all_significant && sig;
        }

        if (all_significant) return minimal_set_check(run, current, params);

        if (current.size() == 1) {
            // insensitive controller: elimination would empty the set
            MinimalSetReport report = minimal_set_check(run, current, params);
            report.verdict = Verdict::NotSufficient;
            report.search_failed = true;
            return report;
        }
        current.erase(members[static_cast<std::size_t>(least_idx)]);
    }
}

using nlohmann::json;

namespace {

json outcome_to_json(const std::map<ChannelGroup, GroupOutcome>& outcomes) {
    json j = json::object();
    for (const auto& [group, outcome] : outcomes) {
        j[group_name(group)] = json{{"finals", outcome.finals},
                                    {"median_rel_change", outcome.median_rel_change},
                                    {"significant", outcome.significant}};
    }
    return j;
}

} // namespace

std::string report_to_json(const MinimalSetReport& report) {
    json candidate = json::array();
    for (ChannelGroup g : report.candidate_set) candidate.push_back(group_name(g));
    json j{{"format", "forage-minimal-set-report"},
           {"version", 1},
           {"candidate_set", std::move(candidate)},
           {"baseline_finals", report.baseline_finals},
           {"remove_one", outcome_to_json(report.remove_one)},
           {"add_one", outcome_to_json(report.add_one)},
           {"verdict", to_string(report.verdict)},
           {"search_failed", report.search_failed}};
    return j.dump(2) + "\n";
}

} // namespace forage
