#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace dlm {

struct PCAModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;         // p x p, orthonormal columns
    Eigen::VectorXd explained_variance; // non-increasing eigenvalues of the sample covariance
};

/// Mean-centered eigendecomposition of the sample covariance, components in
/// decreasing explained-variance order. Sign convention: the largest-magnitude
/// loading of each component is positive.
PCAModel fit_pca(const Eigen::MatrixXd& X);

/// Projects rows of X onto the first d components (after centering).
Eigen::MatrixXd pca_project(const PCAModel& model, const Eigen::MatrixXd& X, int d);

/// LOOCV LDA accuracy over PCA truncations: one (d, accuracy) pair per entry
/// of dims.
std::vector<std::pair<int, double>> pca_sweep_lda(const Eigen::MatrixXd& X,
                                                  const std::vector<int>& labels,
                                                  const std::vector<int>& dims, double lambda);

/// The dimension grid used by the sweep when none is configured.
const std::vector<int>& default_sweep_dims();

} // namespace dlm
