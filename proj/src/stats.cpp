#include "dlm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dlm/errors.hpp"

namespace dlm {

double majority_baseline(const std::vector<int>& labels) {
    if (labels.empty()) raise(Err::EmptyLabels, "majority baseline of an empty label list");
    std::unordered_map<int, std::size_t> counts;
    for (int label : labels) ++counts[label];
    std::size_t max_count = 0;
    for (const auto& [label, count] : counts) max_count = std::max(max_count, count);
    return static_cast<double>(max_count) / static_cast<double>(labels.size());
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

ProportionsTest proportions_test(long successes1, long n1, long successes2, long n2) {
    if (n1 <= 0 || n2 <= 0) raise(Err::EmptyLabels, "proportions test needs positive sample sizes");
    if (successes1 < 0 || successes1 > n1 || successes2 < 0 || successes2 > n2)
        raise(Err::EmptyLabels, "success counts must lie within their sample sizes");

    ProportionsTest result;
    double p1 = static_cast<double>(successes1) / static_cast<double>(n1);
    double p2 = static_cast<double>(successes2) / static_cast<double>(n2);
    double pooled = static_cast<double>(successes1 + successes2) / static_cast<double>(n1 + n2);
    if (pooled == 0.0 || pooled == 1.0) {
        result.degenerate = true;
        result.z = 0.0;
        result.p_value = 1.0;
        return result;
    }
    double se = std::sqrt(pooled * (1.0 - pooled) *
                          (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    result.z = (p1 - p2) / se;
    result.p_value = 2.0 * normal_cdf(-std::abs(result.z));
    return result;
}

} // namespace dlm
