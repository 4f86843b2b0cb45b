#include "dlm/pca.hpp"

#include <Eigen/Eigenvalues>

#include "dlm/errors.hpp"
#include "dlm/lda.hpp"

namespace dlm {

PCAModel fit_pca(const Eigen::MatrixXd& X) {
    if (!X.allFinite()) raise(Err::NonFiniteInput, "PCA input must be finite");
    if (X.rows() < 2) raise(Err::ShapeMismatch, "PCA needs at least two rows");

    const Eigen::Index p = X.cols();
    PCAModel model;
    model.mean = X.colwise().mean();
    Eigen::MatrixXd centered = X.rowwise() - model.mean.transpose();
    Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(X.rows() - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        raise(Err::NonFiniteInput, "eigendecomposition of the covariance failed");

    // Eigen returns ascending eigenvalues; flip to decreasing.
    model.explained_variance.resize(p);
    model.components.resize(p, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        double value = solver.eigenvalues()[p - 1 - j];
        model.explained_variance[j] = value > 0.0 ? value : 0.0;
        model.components.col(j) = solver.eigenvectors().col(p - 1 - j);
    }
    for (Eigen::Index j = 0; j < p; ++j) {
        Eigen::Index arg = 0;
        model.components.col(j).cwiseAbs().maxCoeff(&arg);
        if (model.components(arg, j) < 0.0) model.components.col(j) = -model.components.col(j);
    }
    return model;
}

Eigen::MatrixXd pca_project(const PCAModel& model, const Eigen::MatrixXd& X, int d) {
    if (X.cols() != model.mean.size())
        raise(Err::ShapeMismatch, "input dimension does not match the fitted PCA");
    if (d < 1 || d > model.components.cols())
        raise(Err::ShapeMismatch, "component count out of range");
    return (X.rowwise() - model.mean.transpose()) * model.components.leftCols(d);
}

std::vector<std::pair<int, double>> pca_sweep_lda(const Eigen::MatrixXd& X,
                                                  const std::vector<int>& labels,
                                                  const std::vector<int>& dims, double lambda) {
    PCAModel model = fit_pca(X);
    std::vector<std::pair<int, double>> curve;
    curve.reserve(dims.size());
    for (int d : dims) {
        Eigen::MatrixXd projected = pca_project(model, X, d);
        ClassificationReport report = loocv_lda(projected, labels, lambda);
        curve.emplace_back(d, report.accuracy);
    }
    return curve;
}

const std::vector<int>& default_sweep_dims() {
    static const std::vector<int> dims = {2, 5, 10, 50, 100, 150, 200, 250, 300};
    return dims;
}

} // namespace dlm
