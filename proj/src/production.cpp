#include "dlm/production.hpp"

#include <algorithm>
#include <unordered_map>

#include "dlm/errors.hpp"
#include "dlm/utf8.hpp"

namespace dlm {

SupportVector predict_cue_support(const Eigen::Ref<const Eigen::RowVectorXd>& s,
                                  const Eigen::MatrixXd& G, double threshold) {
    if (s.size() != G.rows())
        raise(Err::ShapeMismatch, "semantic vector length does not match the production mapping");
    SupportVector support;
    support.values = s * G;
    support.threshold = threshold;
    return support;
}

std::vector<int> active_grams(const SupportVector& support) {
    std::vector<int> active;
    for (Eigen::Index j = 0; j < support.values.size(); ++j)
        if (support.values[j] > support.threshold) active.push_back(static_cast<int>(j));
    return active;
}

OrderGraph build_order_graph(const std::vector<int>& active, const GramIndex& index, int order) {
    OrderGraph graph;
    graph.vertices = active;
    std::sort(graph.vertices.begin(), graph.vertices.end());

    const std::size_t m = graph.vertices.size();
    std::vector<std::vector<char32_t>> symbols(m);
    for (std::size_t v = 0; v < m; ++v)
        symbols[v] = utf8_decode(index.grams[static_cast<std::size_t>(graph.vertices[v])]);

    graph.edges.resize(m);
    graph.is_end.resize(m, false);
    for (std::size_t v = 0; v < m; ++v) {
        if (symbols[v].front() == U'#') graph.starts.push_back(static_cast<int>(v));
        if (symbols[v].back() == U'#') graph.is_end[v] = true;
    }
    const int overlap = order - 1;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            bool match = true;
            for (int k = 0; k < overlap; ++k) {
                if (symbols[a][symbols[a].size() - static_cast<std::size_t>(overlap) +
                               static_cast<std::size_t>(k)] !=
                    symbols[b][static_cast<std::size_t>(k)]) {
                    match = false;
                    break;
                }
            }
            if (match) graph.edges[a].push_back(static_cast<int>(b));
        }
    }
    return graph;
}

namespace {

struct BeamState {
    int vertex = -1; // local index
    std::vector<char32_t> assembled;
    std::vector<int> path; // gram ids
    double support_sum = 0.0;

    double mean() const {
        return path.empty() ? 0.0 : support_sum / static_cast<double>(path.size());
    }
};

bool state_order(const BeamState& a, const BeamState& b) {
    double ma = a.mean(), mb = b.mean();
    if (ma != mb) return ma > mb;
    return a.assembled < b.assembled;
}

std::string decode_form(const std::vector<char32_t>& assembled) {
    std::vector<char32_t> stripped;
    stripped.reserve(assembled.size());
    for (char32_t cp : assembled)
        if (cp != U'#') stripped.push_back(cp);
    return utf8_encode(stripped);
}

} // namespace

std::vector<CandidateForm> synthesize_forms(const SupportVector& support, const GramIndex& index,
                                            int order, int beam, int max_len) {
    if (beam < 1) raise(Err::BadOrder, "beam width must be positive");
    if (max_len < 1) raise(Err::BadOrder, "max_len must be positive");
    if (support.values.size() != index.size())
        raise(Err::ShapeMismatch, "support vector is not aligned to the gram index");

    OrderGraph graph = build_order_graph(active_grams(support), index, order);
    std::vector<std::vector<char32_t>> symbols(graph.vertices.size());
    for (std::size_t v = 0; v < graph.vertices.size(); ++v)
        symbols[v] = utf8_decode(index.grams[static_cast<std::size_t>(graph.vertices[v])]);

    auto decoded_len = [](const std::vector<char32_t>& assembled) {
        std::size_t len = assembled.size();
        for (char32_t cp : assembled)
            if (cp == U'#') --len;
        return len;
    };

    std::vector<CandidateForm> completed;
    std::vector<BeamState> frontier;
    for (int v : graph.starts) {
        BeamState state;
        state.vertex = v;
        state.assembled = symbols[static_cast<std::size_t>(v)];
        state.path = {graph.vertices[static_cast<std::size_t>(v)]};
        state.support_sum = support.values[graph.vertices[static_cast<std::size_t>(v)]];
        if (decoded_len(state.assembled) > static_cast<std::size_t>(max_len)) continue;
        if (graph.is_end[static_cast<std::size_t>(v)]) {
            completed.push_back({decode_form(state.assembled), state.path, state.mean(), 0.0});
        } else {
            frontier.push_back(std::move(state));
        }
    }

    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end(), state_order);
        if (frontier.size() > static_cast<std::size_t>(beam))
            frontier.resize(static_cast<std::size_t>(beam));

        std::vector<BeamState> next;
        for (const BeamState& state : frontier) {
            for (int nb : graph.edges[static_cast<std::size_t>(state.vertex)]) {
                const auto& gram = symbols[static_cast<std::size_t>(nb)];
                BeamState succ;
                succ.vertex = nb;
                succ.assembled = state.assembled;
                succ.assembled.push_back(gram.back());
                if (decoded_len(succ.assembled) > static_cast<std::size_t>(max_len)) continue;
                succ.path = state.path;
                succ.path.push_back(graph.vertices[static_cast<std::size_t>(nb)]);
                succ.support_sum =
                    state.support_sum + support.values[graph.vertices[static_cast<std::size_t>(nb)]];
                if (graph.is_end[static_cast<std::size_t>(nb)]) {
                    completed.push_back(
                        {decode_form(succ.assembled), succ.path, succ.mean(), 0.0});
                } else {
                    next.push_back(std::move(succ));
                }
            }
        }
        frontier = std::move(next);
    }

    if (completed.empty()) raise(Err::NoPath, "no start-to-end path above the support threshold");
    std::sort(completed.begin(), completed.end(), [](const CandidateForm& a, const CandidateForm& b) {
        if (a.path_score != b.path_score) return a.path_score > b.path_score;
        return a.word < b.word;
    });
    if (completed.size() > static_cast<std::size_t>(beam))
        completed.resize(static_cast<std::size_t>(beam));
    return completed;
}

CandidateForm rerank_by_feedback(std::vector<CandidateForm>& candidates, const Eigen::MatrixXd& F,
                                 const Eigen::Ref<const Eigen::VectorXd>& target_s,
                                 const GramIndex& index, int order, Metric metric) {
    if (candidates.empty()) raise(Err::EmptyEvaluation, "no candidates to re-rank");
    std::size_t best = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        CandidateForm& cand = candidates[i];
        Eigen::RowVectorXd row = to_dense_row(encode_word(cand.word, index, order), index.size());
        Eigen::VectorXd predicted = (row * F).transpose();
        cand.feedback_score = similarity(predicted, target_s, metric);
        if (i == 0) continue;
        const CandidateForm& leader = candidates[best];
        if (cand.feedback_score > leader.feedback_score ||
            (cand.feedback_score == leader.feedback_score &&
             (cand.path_score > leader.path_score ||
              (cand.path_score == leader.path_score && cand.word < leader.word)))) {
            best = i;
        }
    }
    return candidates[best];
}

const char* to_string(ProductionOutcome outcome) {
    switch (outcome) {
    case ProductionOutcome::correct: return "correct";
    case ProductionOutcome::same_lexeme_feature_change: return "same_lexeme_feature_change";
    case ProductionOutcome::wrong_lexeme: return "wrong_lexeme";
    case ProductionOutcome::nonword: return "nonword";
    }
    return "?";
}

namespace {

ProductionErrorRecord classify_against(const WordEntry& target, const std::string& produced,
                                       const WordEntry* produced_entry) {
    ProductionErrorRecord record;
    record.target = target.word;
    record.produced = produced;
    if (produced == target.word) {
        record.category = ProductionOutcome::correct;
        return record;
    }
    if (!produced_entry) {
        record.category = ProductionOutcome::nonword;
        return record;
    }
    if (produced_entry->lemma != target.lemma) {
        record.category = ProductionOutcome::wrong_lexeme;
        return record;
    }
    record.category = ProductionOutcome::same_lexeme_feature_change;
    for (const std::string& column : feature_columns()) {
        if (feature_value(target, column) != feature_value(*produced_entry, column))
            record.changed_features.push_back(column);
    }
    return record;
}

} // namespace

ProductionErrorRecord classify_production_error(const WordEntry& target,
                                                const std::string& produced,
                                                const Lexicon& lexicon) {
    const WordEntry* found = nullptr;
    for (const WordEntry& e : lexicon.entries) {
        if (e.word == produced) {
            found = &e;
            break;
        }
    }
    return classify_against(target, produced, found);
}

ProductionReport evaluate_production(const Dataset& dataset, const MappingPair& pair,
                                     const GramIndex& index, int order,
                                     const ProductionOptions& options) {
    if (dataset.size() == 0) raise(Err::EmptyEvaluation, "production evaluation on an empty set");
    const Eigen::MatrixXd& feedback_F = options.feedback_F ? *options.feedback_F : pair.F;
    const GramIndex& feedback_index = options.feedback_index ? *options.feedback_index : index;

    std::unordered_map<std::string, const WordEntry*> vocab;
    if (options.vocabulary) {
        for (const WordEntry& e : options.vocabulary->entries) vocab.emplace(e.word, &e);
    } else {
        for (const WordEntry& e : dataset.features) vocab.emplace(e.word, &e);
    }

    ProductionReport report;
    report.records.reserve(dataset.size());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        Eigen::RowVectorXd s = dataset.S.row(static_cast<Eigen::Index>(i));
        SupportVector support = predict_cue_support(s, pair.G, options.theta);

        std::string produced;
        double path_score = 0.0;
        double feedback_score = 0.0;
        try {
            std::vector<CandidateForm> candidates =
                synthesize_forms(support, index, order, options.beam, options.max_len);
            CandidateForm best = rerank_by_feedback(candidates, feedback_F, s.transpose(),
                                                    feedback_index, order, options.metric);
            produced = best.word;
            path_score = best.path_score;
            feedback_score = best.feedback_score;
        } catch (const Error& e) {
            if (e.code() != Err::NoPath) throw;
        }

        auto it = vocab.find(produced);
        ProductionErrorRecord record = classify_against(
            dataset.features[i], produced, it == vocab.end() ? nullptr : it->second);
        record.path_score = path_score;
        record.feedback_score = feedback_score;
        if (record.category == ProductionOutcome::correct) ++correct;
        report.records.push_back(std::move(record));
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());
    return report;
}

} // namespace dlm
