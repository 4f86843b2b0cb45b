#include "dlm/mapping.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "dlm/errors.hpp"

namespace dlm {

namespace {
// relative cutoff for treating singular values as zero
constexpr double kSingularTol = 1e-10;
} // namespace

Metric metric_from_string(const std::string& name) {
    if (name == "pearson") return Metric::pearson;
    if (name == "cosine") return Metric::cosine;
    raise(Err::UnknownFeature, "unknown similarity metric \"" + name + "\"");
}

const char* to_string(Metric metric) {
    return metric == Metric::pearson ? "pearson" : "cosine";
}

Eigen::MatrixXd solve_mapping(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, double ridge) {
    if (!X.allFinite() || !Y.allFinite())
        raise(Err::NonFiniteInput, "solve_mapping inputs must be finite");
    if (X.rows() != Y.rows())
        raise(Err::ShapeMismatch, "X and Y must have the same number of rows");
    if (ridge < 0.0) raise(Err::NonFiniteInput, "ridge must be non-negative");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;

    Eigen::VectorXd filter(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        double s = sv[i];
        if (ridge > 0.0) {
            filter[i] = s / (s * s + ridge);
        } else {
            filter[i] = (smax > 0.0 && s > kSingularTol * smax) ? 1.0 / s : 0.0;
        }
    }
    return svd.matrixV() * (filter.asDiagonal() * (svd.matrixU().transpose() * Y));
}

MappingPair train_endstate(const CueMatrix& C, const Eigen::MatrixXd& S, double ridge) {
    if (static_cast<Eigen::Index>(C.words.size()) != S.rows())
        raise(Err::ShapeMismatch, "cue matrix and semantic matrix row counts differ");
    Eigen::MatrixXd dense = C.dense();
    MappingPair pair;
    pair.ridge = ridge;
    pair.F = solve_mapping(dense, S, ridge);
    pair.G = solve_mapping(S, dense, ridge);
    return pair;
}

Eigen::MatrixXd predict_semantics(const Eigen::MatrixXd& rows, const Eigen::MatrixXd& F) {
    if (rows.cols() != F.rows())
        raise(Err::ShapeMismatch, "form rows do not match the mapping's gram count");
    return rows * F;
}

double similarity(const Eigen::Ref<const Eigen::VectorXd>& u,
                  const Eigen::Ref<const Eigen::VectorXd>& v, Metric metric) {
    if (u.size() != v.size()) raise(Err::ShapeMismatch, "similarity needs equal-length vectors");
    double score = 0.0;
    if (metric == Metric::pearson) {
        if (u.size() < 2) raise(Err::ShapeMismatch, "pearson needs vectors of length >= 2");
        Eigen::VectorXd uc = u.array() - u.mean();
        Eigen::VectorXd vc = v.array() - v.mean();
        double nu = uc.norm();
        double nv = vc.norm();
        if (nu == 0.0 || nv == 0.0)
            raise(Err::ZeroVariance, "pearson correlation of a constant vector");
        score = uc.dot(vc) / (nu * nv);
    } else {
        double nu = u.norm();
        double nv = v.norm();
        if (nu == 0.0 || nv == 0.0) raise(Err::ZeroNorm, "cosine similarity of a zero vector");
        score = u.dot(v) / (nu * nv);
    }
    if (score > 1.0) score = 1.0;
    if (score < -1.0) score = -1.0;
    return score;
}

namespace {

// Rows centered (pearson) and scaled to unit norm, so similarity becomes a
// plain dot product. Degenerate rows raise the same errors as similarity().
Eigen::MatrixXd metric_transform(const Eigen::MatrixXd& M, Metric metric, const char* what) {
    if (metric == Metric::pearson && M.cols() < 2)
        raise(Err::ShapeMismatch, "pearson needs vectors of length >= 2");
    Eigen::MatrixXd T = M;
    if (metric == Metric::pearson) T.colwise() -= T.rowwise().mean();
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
        double norm = T.row(i).norm();
        if (norm == 0.0) {
            if (metric == Metric::pearson)
                raise(Err::ZeroVariance,
                      std::string(what) + " row " + std::to_string(i) + " is constant");
            raise(Err::ZeroNorm, std::string(what) + " row " + std::to_string(i) + " is zero");
        }
        T.row(i) /= norm;
    }
    return T;
}

} // namespace

ComprehensionReport evaluate_comprehension(const Eigen::MatrixXd& predicted,
                                           const Eigen::MatrixXd& gold,
                                           const std::vector<int>& target_ids, Metric metric) {
    if (predicted.cols() != gold.cols())
        raise(Err::ShapeMismatch, "predicted and gold dimensions differ");
    if (static_cast<Eigen::Index>(target_ids.size()) != predicted.rows())
        raise(Err::ShapeMismatch, "one target id per predicted row required");
    for (int t : target_ids)
        if (t < 0 || t >= gold.rows())
            raise(Err::ShapeMismatch, "target id outside the gold matrix");

    Eigen::MatrixXd P = metric_transform(predicted, metric, "predicted");
    Eigen::MatrixXd G = metric_transform(gold, metric, "gold");
    Eigen::MatrixXd scores = P * G.transpose(); // m x n similarities

    ComprehensionReport report;
    report.metric = metric;
    report.per_word.resize(target_ids.size());
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        Eigen::Index best = 0;
        double best_score = scores(i, 0);
        int ties = 1;
        for (Eigen::Index j = 1; j < scores.cols(); ++j) {
            double s = scores(i, j);
            if (s > best_score) {
                best_score = s;
                best = j;
                ties = 1;
            } else if (s == best_score) {
                ++ties;
            }
        }
        ComprehensionItem& item = report.per_word[static_cast<std::size_t>(i)];
        item.target_id = target_ids[static_cast<std::size_t>(i)];
        item.nearest_id = static_cast<int>(best);
        item.score = best_score;
        item.correct = (ties == 1 && static_cast<int>(best) == item.target_id);
        if (item.correct) ++correct;
    }
    report.accuracy = report.per_word.empty()
                          ? 0.0
                          : static_cast<double>(correct) / static_cast<double>(report.per_word.size());
    return report;
}

} // namespace dlm
