#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "dlm/cues.hpp"
#include "dlm/lexdata.hpp"
#include "dlm/mapping.hpp"

namespace dlm {

/// Per-gram activation predicted from a semantic vector, gated by the
/// threshold before synthesis. values is aligned to the trained GramIndex.
struct SupportVector {
    Eigen::RowVectorXd values;
    double threshold = 0.01;
};

/// values = s * G.
SupportVector predict_cue_support(const Eigen::Ref<const Eigen::RowVectorXd>& s,
                                  const Eigen::MatrixXd& G, double threshold = 0.01);

/// Gram ids with support strictly above the threshold, ascending.
std::vector<int> active_grams(const SupportVector& support);

/// Directed graph over the active grams: edge a -> b iff the last n-1 symbols
/// of a equal the first n-1 symbols of b. Start vertices begin with `#`, end
/// vertices end with `#`.
struct OrderGraph {
    std::vector<int> vertices;           // gram ids, ascending
    std::vector<std::vector<int>> edges; // adjacency by local vertex index
    std::vector<int> starts;             // local indices
    std::vector<bool> is_end;
};

OrderGraph build_order_graph(const std::vector<int>& active, const GramIndex& index, int order);

struct CandidateForm {
    std::string word;       // decoded form, boundary `#`s stripped
    std::vector<int> path;  // gram ids along the path, revisits included
    double path_score = 0.0;     // mean support along the path
    double feedback_score = 0.0; // similarity of re-comprehended semantics to the target
};

/// Beam search over the order graph from start to end vertices. A vertex may
/// repeat as long as the decoded form stays within max_len symbols. Returns
/// up to `beam` candidates ranked by path_score; raises Err::NoPath when no
/// start-to-end path exists above the threshold.
std::vector<CandidateForm> synthesize_forms(const SupportVector& support, const GramIndex& index,
                                            int order, int beam, int max_len);

/// Re-encodes each candidate, maps it through F and scores the similarity to
/// target_s. Returns the candidate with maximal feedback score; ties break by
/// higher path_score, then lexicographically smaller word.
CandidateForm rerank_by_feedback(std::vector<CandidateForm>& candidates, const Eigen::MatrixXd& F,
                                 const Eigen::Ref<const Eigen::VectorXd>& target_s,
                                 const GramIndex& index, int order, Metric metric);

enum class ProductionOutcome { correct, same_lexeme_feature_change, wrong_lexeme, nonword };

const char* to_string(ProductionOutcome outcome);

struct ProductionErrorRecord {
    std::string target;
    std::string produced; // empty marker when synthesis found no path
    ProductionOutcome category = ProductionOutcome::correct;
    std::vector<std::string> changed_features;
    double path_score = 0.0;
    double feedback_score = 0.0;
};

/// Closed-world error taxonomy: correct / same lexeme with changed features /
/// wrong lexeme / nonword, judged against the lexicon.
ProductionErrorRecord classify_production_error(const WordEntry& target,
                                                const std::string& produced,
                                                const Lexicon& lexicon);

struct ProductionReport {
    double accuracy = 0.0;
    std::vector<ProductionErrorRecord> records;
};

struct ProductionOptions {
    double theta = 0.01;
    int beam = 20;
    int max_len = 30;
    Metric metric = Metric::pearson;
    /// Mapping used by the feedback loop; defaults to pair.F when null. When
    /// the feedback mapping was trained on a different word set (e.g. train
    /// plus held-out), feedback_index names the gram index it runs over.
    const Eigen::MatrixXd* feedback_F = nullptr;
    const GramIndex* feedback_index = nullptr;
    /// Vocabulary for the error taxonomy; defaults to the dataset's own entries.
    const Lexicon* vocabulary = nullptr;
};

/// Per word: predict support -> synthesize -> feedback re-rank -> compare.
/// Words hitting NoPath are scored incorrect with an empty produced marker.
ProductionReport evaluate_production(const Dataset& dataset, const MappingPair& pair,
                                     const GramIndex& index, int order,
                                     const ProductionOptions& options = {});

} // namespace dlm
