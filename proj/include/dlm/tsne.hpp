#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace dlm {

struct TsneOptions {
    double perplexity = 30.0;
    int iterations = 1000;
    std::uint64_t seed = 1;
    // fixed schedule: early exaggeration for the first 250 iterations,
    // momentum 0.5 switching to 0.8 at the same point
    int exaggeration_iters = 250;
    double exaggeration = 12.0;
    double learning_rate = 200.0;
    double momentum_start = 0.5;
    double momentum_final = 0.8;
};

/// Exact O(n^2) t-SNE to 2 dimensions: per-point Gaussian bandwidths matched
/// to the perplexity by bisection (entropy tolerance 1e-5, at most 50 steps),
/// symmetrized P, gradient descent with momentum. Deterministic under seed.
/// When kl_trace is given, (iteration, KL divergence) pairs are recorded
/// after the exaggeration phase. Raises Err::PerplexityTooLarge unless
/// 1 < perplexity < (n-1)/3.
Eigen::MatrixXd tsne(const Eigen::MatrixXd& X, const TsneOptions& options,
                     std::vector<std::pair<int, double>>* kl_trace = nullptr);

Eigen::MatrixXd tsne(const Eigen::MatrixXd& X, double perplexity, int iterations,
                     std::uint64_t seed);

} // namespace dlm
