#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "dlm/cues.hpp"

namespace dlm {

enum class Metric { pearson, cosine };

Metric metric_from_string(const std::string& name);
const char* to_string(Metric metric);

/// Comprehension mapping F (grams x dim) and production mapping G (dim x grams)
/// learned end-state from the same training rows.
struct MappingPair {
    Eigen::MatrixXd F;
    Eigen::MatrixXd G;
    double ridge = 0.0;
};

/// Minimizer of ||XW - Y||^2 + ridge * ||W||^2, computed from the SVD of X.
/// With ridge = 0 and rank-deficient X this is the minimum-norm least-squares
/// solution; singular values below 1e-10 * sigma_max are treated as zero.
Eigen::MatrixXd solve_mapping(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double ridge);

/// F = solve(C, S, ridge) and G = solve(S, C, ridge).
MappingPair train_endstate(const CueMatrix& C, const Eigen::MatrixXd& S, double ridge);

/// rows * F: maps binary form rows to predicted semantic vectors.
Eigen::MatrixXd predict_semantics(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& F);

double similarity(const Eigen::Ref<const Eigen::VectorXd>& u,
                  const Eigen::Ref<const Eigen::VectorXd>& v, Metric metric);

struct ComprehensionItem {
    int target_id = -1;
    int nearest_id = -1;
    double score = 0.0;
    bool correct = false;
};

struct ComprehensionReport {
    double accuracy = 0.0;
    std::vector<ComprehensionItem> per_word;
    Metric metric = Metric::pearson;
};

/// Word i is correct iff its predicted vector is strictly closest to gold row
/// target_ids[i] among all gold rows; ties count as incorrect.
ComprehensionReport evaluate_comprehension(const Eigen::MatrixXd& predicted,
                                           const Eigen::MatrixXd& gold,
                                           const std::vector<int>& target_ids, Metric metric);

} // namespace dlm
