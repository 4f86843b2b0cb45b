#include "dlm/tsne.hpp"

#include <cmath>
#include <limits>

#include "dlm/errors.hpp"
#include "dlm/rng.hpp"

namespace dlm {

namespace {

constexpr double kEntropyTol = 1e-5;
constexpr int kBisectionSteps = 50;
constexpr double kMinProb = 1e-12;

// Conditional probabilities for one point: bandwidth bisected until the
// entropy of P_i matches log(perplexity).
void conditional_row(const Eigen::VectorXd& sq_dist, Eigen::Index i, double target_entropy,
                     Eigen::VectorXd& row) {
    const Eigen::Index n = sq_dist.size();
    double beta = 1.0;
    double beta_min = -std::numeric_limits<double>::infinity();
    double beta_max = std::numeric_limits<double>::infinity();

    for (int step = 0; step < kBisectionSteps; ++step) {
        double sum = 0.0;
        double weighted = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) {
                row[j] = 0.0;
                continue;
            }
            double w = std::exp(-beta * sq_dist[j]);
            row[j] = w;
            sum += w;
            weighted += w * sq_dist[j];
        }
        double entropy = sum > 0.0 ? std::log(sum) + beta * weighted / sum : 0.0;
        double diff = entropy - target_entropy;
        if (std::abs(diff) < kEntropyTol) break;
        if (diff > 0.0) {
            beta_min = beta;
            beta = std::isinf(beta_max) ? beta * 2.0 : 0.5 * (beta + beta_max);
        } else {
            beta_max = beta;
            beta = std::isinf(beta_min) ? beta * 0.5 : 0.5 * (beta + beta_min);
        }
    }
    double sum = row.sum();
    if (sum > 0.0) row /= sum;
}

double kl_divergence(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Y) {
    const Eigen::Index n = Y.rows();
    double z = 0.0;
    Eigen::MatrixXd num(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) {
                num(i, j) = 0.0;
                continue;
            }
            double d = (Y.row(i) - Y.row(j)).squaredNorm();
            num(i, j) = 1.0 / (1.0 + d);
        }
        z += num.row(i).sum();
    }
    double kl = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            double p = P(i, j);
            if (p <= 0.0) continue;
            double q = num(i, j) / z;
            if (q < kMinProb) q = kMinProb;
            kl += p * std::log(p / q);
        }
    }
    return kl;
}

} // namespace

Eigen::MatrixXd tsne(const Eigen::MatrixXd& X, const TsneOptions& options,
                     std::vector<std::pair<int, double>>* kl_trace) {
    if (!X.allFinite()) raise(Err::NonFiniteInput, "t-SNE input must be finite");
    const Eigen::Index n = X.rows();
    if (n < 2) raise(Err::ShapeMismatch, "t-SNE needs at least two points");
    if (options.perplexity <= 1.0 ||
        options.perplexity >= static_cast<double>(n - 1) / 3.0)
        raise(Err::PerplexityTooLarge,
              "perplexity must lie in (1, (n-1)/3) for n = " + std::to_string(n));
    if (options.iterations < 1) raise(Err::BadOrder, "iteration count must be positive");

    // symmetrized input similarities
    Eigen::VectorXd sq_norms = X.rowwise().squaredNorm();
    Eigen::MatrixXd P(n, n);
    {
        Eigen::VectorXd dist(n), row(n);
        const double target_entropy = std::log(options.perplexity);
        for (Eigen::Index i = 0; i < n; ++i) {
            dist = (sq_norms.array() + sq_norms[i] -
                    2.0 * (X * X.row(i).transpose()).array())
                       .max(0.0);
            conditional_row(dist, i, target_entropy, row);
            P.row(i) = row;
        }
    }
    P = (P + P.transpose()) / (2.0 * static_cast<double>(n));
    P = P.cwiseMax(kMinProb);
    P.diagonal().setZero();

    Rng rng(options.seed);
    Eigen::MatrixXd Y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index d = 0; d < 2; ++d) Y(i, d) = 1e-4 * rng.next_gaussian();

    Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(n, 2);
    Eigen::MatrixXd gradient(n, 2);
    Eigen::MatrixXd attraction(n, n);

    for (int iter = 0; iter < options.iterations; ++iter) {
        const bool exaggerating = iter < options.exaggeration_iters;
        const double exaggeration = exaggerating ? options.exaggeration : 1.0;
        const double momentum =
            iter < options.exaggeration_iters ? options.momentum_start : options.momentum_final;

        // student-t affinities in the embedding
        double z = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) {
                    attraction(i, j) = 0.0;
                    continue;
                }
                double d = (Y.row(i) - Y.row(j)).squaredNorm();
                attraction(i, j) = 1.0 / (1.0 + d);
            }
            z += attraction.row(i).sum();
        }

        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::RowVector2d g = Eigen::RowVector2d::Zero();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                double q = attraction(i, j) / z;
                if (q < kMinProb) q = kMinProb;
                double mult = (exaggeration * P(i, j) - q) * attraction(i, j);
                g += mult * (Y.row(i) - Y.row(j));
            }
            gradient.row(i) = 4.0 * g;
        }

        velocity = momentum * velocity - options.learning_rate * gradient;
        Y += velocity;
        Y.rowwise() -= Y.colwise().mean();

        if (kl_trace && !exaggerating) {
            int done = iter + 1;
            if (done % 25 == 0 || done == options.iterations)
                kl_trace->emplace_back(done, kl_divergence(P, Y));
        }
    }
    return Y;
}

Eigen::MatrixXd tsne(const Eigen::MatrixXd& X, double perplexity, int iterations,
                     std::uint64_t seed) {
    TsneOptions options;
    options.perplexity = perplexity;
    options.iterations = iterations;
    options.seed = seed;
    return tsne(X, options, nullptr);
}

} // namespace dlm
