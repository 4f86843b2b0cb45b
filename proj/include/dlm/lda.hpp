#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace dlm {

/// Linear discriminant classifier with optional covariance shrinkage:
/// pooled_cov = (1 - lambda) * Sigma_pooled + lambda * (tr(Sigma_pooled)/p) * I.
struct LDAModel {
    Eigen::MatrixXd class_means; // k x p
    Eigen::MatrixXd pooled_cov;  // p x p, after shrinkage
    Eigen::VectorXd priors;      // class frequencies, sum to 1
    double lambda = 0.0;

    // precomputed discriminant: score_c(x) = coef.col(c).dot(x) + intercept[c]
    Eigen::MatrixXd coef;      // p x k
    Eigen::VectorXd intercept; // k

    int classes() const { return static_cast<int>(class_means.rows()); }
    int dim() const { return static_cast<int>(class_means.cols()); }
};

/// Labels are dense class ids 0..k-1; every class needs at least one sample.
/// Raises Err::SingularCovariance when lambda = 0 and the pooled covariance
/// is not positive definite.
LDAModel fit_lda(const Eigen::MatrixXd& X, const std::vector<int>& labels, double lambda);

/// Argmax of the discriminant scores with posteriors from their softmax;
/// ties break to the lowest class id.
std::pair<int, Eigen::VectorXd> predict_lda(const LDAModel& model,
                                            const Eigen::Ref<const Eigen::VectorXd>& x);

struct ClassificationReport {
    Eigen::MatrixXi confusion; // rows = actual, columns = predicted
    double accuracy = 0.0;
    Eigen::VectorXd per_class_accuracy;
    double majority_baseline = 0.0;
    double p_value = 1.0;
    bool degenerate_p = false;
    int n = 0;
};

/// Leave-one-out cross-validation: for each row, fit on the others and
/// predict it. Implemented with exact mean/scatter downdates of the full-data
/// statistics, so it matches a naive refit-per-row run. Every class needs at
/// least 2 samples.
ClassificationReport loocv_lda(const Eigen::MatrixXd& X, const std::vector<int>& labels,
                               double lambda);

} // namespace dlm
