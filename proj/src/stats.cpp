#include "forage/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace forage {

double median(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

static double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

MannWhitneyResult mann_whitney_u(std::span<const double> a,
                                 std::span<const double> b) {
    const std::size_t n1 = a.size(), n2 = b.size();
    if (n1 == 0 || n2 == 0)
        throw std::invalid_argument("mann_whitney_u: empty sample");

    // pooled values with group tags, average ranks over ties
    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(n1 + n2);
    for (double v : a) pooled.emplace_back(v, 0);
    for (double v : b) pooled.emplace_back(v, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    const std::size_t n = n1 + n2;
    double rank_sum_a = 0.0;
    double tie_term = 0.0; // sum of t^3 - t over tie groups
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        const double t = static_cast<double>(j - i);
        if (j - i > 1) tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second == 0) rank_sum_a += avg_rank;
        }
        i = j;
    }

    const double fn1 = static_cast<double>(n1), fn2 = static_cast<double>(n2);
    const double u = fn1 * fn2 + fn1 * (fn1 + 1.0) / 2.0 - rank_sum_a;
    // u above is U of sample b by the rank-sum identity; report U of a
    const double u_a = fn1 * fn2 - u;

    const double mean_u = fn1 * fn2 / 2.0;
    const double fn = static_cast<double>(n);
    const double var =
        (fn1 * fn2 / 12.0) * ((fn + 1.0) - tie_term / (fn * (fn - 1.0)));

    MannWhitneyResult result;
    result.u = u_a;
    if (var <= 0.0) {
        result.p_value = 1.0;
        return result;
    }
    const double sd = std::sqrt(var);
    double z = (std::abs(u_a - mean_u) - 0.5) / sd; // continuity correction
    if (z < 0.0) z = 0.0;
    result.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
    return result;
}

} // namespace forage
