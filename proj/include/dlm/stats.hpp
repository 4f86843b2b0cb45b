#pragma once

#include <vector>

namespace dlm {

/// Accuracy of always predicting the most frequent class: max count / n.
double majority_baseline(const std::vector<int>& labels);

struct ProportionsTest {
    double z = 0.0;
    double p_value = 1.0;
    /// Pooled proportion was 0 or 1; p = 1 by convention.
    bool degenerate = false;
};

/// Two-sample proportion z-test with pooled variance, two-sided, no
/// continuity correction.
ProportionsTest proportions_test(long successes1, long n1, long successes2, long n2);

/// Standard normal CDF.
double normal_cdf(double x);

} // namespace dlm
