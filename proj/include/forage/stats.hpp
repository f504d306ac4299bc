#pragma once

#include <span>

namespace forage {

struct MannWhitneyResult {
    double u = 0.0;       // U statistic of the first sample
    double p_value = 1.0; // two-sided, normal approximation
};

// Two-sided Mann-Whitney U with average ranks for ties, tie-corrected
// variance and continuity correction. Degenerate case (all values
// equal) reports p = 1.
MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b);

double median(std::span<const double> values);

} // namespace forage
