#include "dlm/lda.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

#include "dlm/errors.hpp"
#include "dlm/stats.hpp"

namespace dlm {

namespace {

struct ClassStats {
    int k = 0;
    std::vector<long> counts;
    Eigen::MatrixXd means;                 // k x p
    std::vector<Eigen::MatrixXd> scatters; // centered, per class
};

ClassStats collect_stats(const Eigen::MatrixXd& X, const std::vector<int>& labels) {
    if (!X.allFinite()) raise(Err::NonFiniteInput, "LDA input must be finite");
    if (static_cast<Eigen::Index>(labels.size()) != X.rows())
        raise(Err::ShapeMismatch, "one label per row required");
    int k = 0;
    for (int label : labels) {
        if (label < 0) raise(Err::ShapeMismatch, "labels must be dense non-negative class ids");
        k = std::max(k, label + 1);
    }
    if (k < 2) raise(Err::ClassTooSmall, "LDA needs at least two classes");

    const Eigen::Index p = X.cols();
    ClassStats stats;
    stats.k = k;
    stats.counts.assign(static_cast<std::size_t>(k), 0);
    stats.means = Eigen::MatrixXd::Zero(k, p);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        stats.means.row(labels[static_cast<std::size_t>(i)]) += X.row(i);
        ++stats.counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
        if (stats.counts[static_cast<std::size_t>(c)] == 0)
            raise(Err::ClassTooSmall, "class " + std::to_string(c) + " has no samples");
        stats.means.row(c) /= static_cast<double>(stats.counts[static_cast<std::size_t>(c)]);
    }
    stats.scatters.assign(static_cast<std::size_t>(k), Eigen::MatrixXd::Zero(p, p));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        int c = labels[static_cast<std::size_t>(i)];
        Eigen::VectorXd d = (X.row(i) - stats.means.row(c)).transpose();
        stats.scatters[static_cast<std::size_t>(c)].noalias() += d * d.transpose();
    }
    return stats;
}

Eigen::MatrixXd shrink(const Eigen::MatrixXd& pooled, double lambda) {
    const Eigen::Index p = pooled.rows();
    double target = pooled.trace() / static_cast<double>(p);
    return (1.0 - lambda) * pooled +
           lambda * target * Eigen::MatrixXd::Identity(p, p);
}

// Assembles the discriminant from class means, a shrunk covariance and priors.
void finish_model(LDAModel& model) {
    Eigen::LLT<Eigen::MatrixXd> llt(model.pooled_cov);
    if (llt.info() != Eigen::Success)
        raise(Err::SingularCovariance,
              "pooled covariance is not positive definite (lambda = " +
                  std::to_string(model.lambda) + ")");
    model.coef = llt.solve(model.class_means.transpose()); // p x k
    const int k = model.classes();
    model.intercept.resize(k);
    for (int c = 0; c < k; ++c) {
        model.intercept[c] = -0.5 * model.class_means.row(c).dot(model.coef.col(c)) +
                             std::log(model.priors[c]);
    }
}

} // namespace

LDAModel fit_lda(const Eigen::MatrixXd& X, const std::vector<int>& labels, double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        raise(Err::ShapeMismatch, "shrinkage must lie in [0,1]");
    ClassStats stats = collect_stats(X, labels);
    const Eigen::Index n = X.rows();
    if (n <= stats.k)
        raise(Err::ClassTooSmall, "LDA needs more samples than classes");

    LDAModel model;
    model.lambda = lambda;
    model.class_means = stats.means;
    Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(X.cols(), X.cols());
    for (const auto& s : stats.scatters) pooled += s;
    pooled /= static_cast<double>(n - stats.k);
    model.pooled_cov = shrink(pooled, lambda);
    model.priors.resize(stats.k);
    for (int c = 0; c < stats.k; ++c)
        model.priors[c] =
            static_cast<double>(stats.counts[static_cast<std::size_t>(c)]) / static_cast<double>(n);
    finish_model(model);
    return model;
}

std::pair<int, Eigen::VectorXd> predict_lda(const LDAModel& model,
                                            const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != model.dim())
        raise(Err::ShapeMismatch, "input dimension does not match the fitted model");
    Eigen::VectorXd scores = model.coef.transpose() * x + model.intercept;
    int best = 0;
    for (int c = 1; c < model.classes(); ++c)
        if (scores[c] > scores[best]) best = c; // ties keep the lowest class id
    Eigen::VectorXd posterior = (scores.array() - scores.maxCoeff()).exp();
    posterior /= posterior.sum();
    return {best, posterior};
}

ClassificationReport loocv_lda(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                               double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        raise(Err::ShapeMismatch, "shrinkage must lie in [0,1]");
    ClassStats stats = collect_stats(X, labels);
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols();
    const int k = stats.k;
    for (int c = 0; c < k; ++c)
        if (stats.counts[static_cast<std::size_t>(c)] < 2)
            raise(Err::ClassTooSmall,
                  "leave-one-out needs at least 2 samples per class (class " +
                      std::to_string(c) + ")");
    if (n - 1 <= k) raise(Err::ClassTooSmall, "leave-one-out needs more samples than classes");

    Eigen::MatrixXd pooled_total = Eigen::MatrixXd::Zero(p, p);
    for (const auto& s : stats.scatters) pooled_total += s;

    ClassificationReport report;
    report.confusion = Eigen::MatrixXi::Zero(k, k);
    report.n = static_cast<int>(n);

    LDAModel fold;
    fold.lambda = lambda;
    fold.priors.resize(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = labels[static_cast<std::size_t>(i)];
        const double nc = static_cast<double>(stats.counts[static_cast<std::size_t>(c)]);
        Eigen::VectorXd x = X.row(i).transpose();

        // exact downdates of the held-out row's class mean and scatter
        Eigen::VectorXd d = x - stats.means.row(c).transpose();
        fold.class_means = stats.means;
        fold.class_means.row(c) =
            (nc * stats.means.row(c) - X.row(i)) / (nc - 1.0);
        Eigen::MatrixXd pooled = pooled_total - (nc / (nc - 1.0)) * (d * d.transpose());
        pooled /= static_cast<double>(n - 1 - k);
        fold.pooled_cov = shrink(pooled, lambda);
        for (int cc = 0; cc < k; ++cc) {
            double count = static_cast<double>(stats.counts[static_cast<std::size_t>(cc)]);
            if (cc == c) count -= 1.0;
            fold.priors[cc] = count / static_cast<double>(n - 1);
        }
        finish_model(fold);

        Eigen::VectorXd scores = fold.coef.transpose() * x + fold.intercept;
        int best = 0;
        for (int cc = 1; cc < k; ++cc)
            if (scores[cc] > scores[best]) best = cc;
        report.confusion(c, best) += 1;
    }

    long correct = 0;
    for (int c = 0; c < k; ++c) correct += report.confusion(c, c);
    report.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    report.per_class_accuracy.resize(k);
    for (int c = 0; c < k; ++c) {
        long row_sum = report.confusion.row(c).sum();
        report.per_class_accuracy[c] =
            row_sum > 0 ? static_cast<double>(report.confusion(c, c)) / static_cast<double>(row_sum)
                        : 0.0;
    }
    report.majority_baseline = majority_baseline(labels);
    long majority_count = *std::max_element(stats.counts.begin(), stats.counts.end());
    ProportionsTest test = proportions_test(correct, n, majority_count, n);
    report.p_value = test.p_value;
    report.degenerate_p = test.degenerate;
    return report;
}

} // namespace dlm
