#include "dlm/commands.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dlm/cues.hpp"
#include "dlm/errors.hpp"
#include "dlm/lda.hpp"
#include "dlm/lexdata.hpp"
#include "dlm/mapping.hpp"
#include "dlm/matrix_io.hpp"
#include "dlm/pca.hpp"
#include "dlm/production.hpp"
#include "dlm/rng.hpp"
#include "dlm/shift.hpp"
#include "dlm/svg.hpp"
#include "dlm/tsne.hpp"

namespace dlm {

namespace {

using nlohmann::json;

std::string num(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_json_file(const std::string& path, const json& doc) {
    write_text_atomic(path, doc.dump(2) + "\n");
}

struct PipelineData {
    Lexicon lexicon; // deduplicated, vector coverage not required
    EmbeddingTable table;
    Dataset dataset;
    std::size_t raw_rows = 0;
    std::size_t dropped_syncretic = 0;
    std::size_t missing_vectors = 0;
    std::size_t violations = 0;
};

PipelineData ingest_pipeline(const ExperimentConfig& config, Diag* diag) {
    validate_config(config);
    PipelineData data;

    std::ifstream lex(config.lexicon_path);
    if (!lex) raise(Err::EmptyInput, "cannot open lexicon file " + config.lexicon_path);
    Lexicon raw = parse_lexicon_file(lex, diag);
    data.raw_rows = raw.entries.size();

    SyncreticResult resolved = resolve_syncretic(raw.entries, diag);
    data.lexicon = std::move(resolved.lexicon);
    data.lexicon.provenance = config.lexicon_path;
    data.dropped_syncretic = resolved.dropped;

    std::vector<Violation> violations = validate_lexicon(data.lexicon);
    data.violations = violations.size();
    for (std::size_t i = 0; i < violations.size() && i < 20; ++i) {
        warn(diag, "lexdata", "invalid_feature_bundle",
             violations[i].word + ": " + violations[i].message);
    }
    if (violations.size() > 20)
        warn(diag, "lexdata", "invalid_feature_bundle_more", "",
             static_cast<long>(violations.size() - 20));

    std::ifstream emb(config.embeddings_path);
    if (!emb) raise(Err::EmptyInput, "cannot open embeddings file " + config.embeddings_path);
    data.table = parse_embedding_file(emb, config.expected_dim, diag);

    JoinResult joined = join_dataset(data.lexicon, data.table, diag);
    data.dataset = std::move(joined.dataset);
    data.missing_vectors = joined.missing;
    return data;
}

std::string comprehension_tsv(const ComprehensionReport& report,
                              const std::vector<std::string>& own_words,
                              const std::vector<std::string>& gold_words) {
    std::string out = "target\tnearest\tscore\tcorrect\n";
    for (std::size_t i = 0; i < report.per_word.size(); ++i) {
        const ComprehensionItem& item = report.per_word[i];
        out += own_words[i] + '\t' + gold_words[static_cast<std::size_t>(item.nearest_id)] +
               '\t' + num(item.score) + '\t' + (item.correct ? "1" : "0") + '\n';
    }
    return out;
}

std::string production_tsv(const ProductionReport& report) {
    std::string out = "target\tproduced\tcategory\tchanged_features\tpath_score\tfeedback_score\n";
    for (const ProductionErrorRecord& r : report.records) {
        std::string changed;
        for (std::size_t i = 0; i < r.changed_features.size(); ++i) {
            if (i) changed += ',';
            changed += r.changed_features[i];
        }
        out += r.target + '\t' + r.produced + '\t' + to_string(r.category) + '\t' + changed +
               '\t' + num(r.path_score) + '\t' + num(r.feedback_score) + '\n';
    }
    return out;
}

char hash_hex_digit(unsigned v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10); }

std::string hash_hex(std::uint64_t value) {
    std::string out = "0x";
    for (int shift = 60; shift >= 0; shift -= 4)
        out.push_back(hash_hex_digit(static_cast<unsigned>((value >> shift) & 0xf)));
    return out;
}

json mapping_sidecar(const ExperimentConfig& config, const GramIndex& index) {
    return json{{"ridge", config.ridge},
                {"metric", config.metric},
                {"gram_index_hash", hash_hex(gram_index_hash(index))}};
}

Eigen::MatrixXd encode_rows(const std::vector<std::string>& words, const GramIndex& index,
                            int order) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(words.size()), index.size());
    for (std::size_t i = 0; i < words.size(); ++i)
        rows.row(static_cast<Eigen::Index>(i)) = to_dense_row(encode_word(words[i], index, order), index.size());
    return rows;
}

// Labeled feature matrix for classification: rows lacking the feature are
// dropped with a count, classes below two members cannot enter LOOCV.
struct LabeledMatrix {
    Eigen::MatrixXd X;
    std::vector<int> ids;
    std::vector<std::string> class_names;
    std::size_t total = 0;           // rows before dropping
    std::size_t dropped_missing = 0; // rows without the feature
    std::vector<std::string> dropped_small; // class labels with < 2 members
};

LabeledMatrix label_rows(const Eigen::MatrixXd& X, const std::vector<std::string>& labels,
                         Diag* diag) {
    LabeledMatrix out;
    out.total = labels.size();
    std::vector<int> keep;
    std::map<std::string, long> counts;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].empty()) {
            ++out.dropped_missing;
            continue;
        }
        keep.push_back(static_cast<int>(i));
        ++counts[labels[i]];
    }
    std::map<std::string, int> id_of;
    for (const auto& [label, count] : counts) {
        if (count < 2) {
            out.dropped_small.push_back(label);
            warn(diag, "semspace", "class_dropped_too_small", label);
            continue;
        }
        int id = static_cast<int>(out.class_names.size());
        id_of.emplace(label, id);
        out.class_names.push_back(label);
    }
    if (out.class_names.size() < 2)
        raise(Err::ClassTooSmall, "need at least two classes with two or more members");

    std::vector<int> rows;
    for (int idx : keep) {
        auto it = id_of.find(labels[static_cast<std::size_t>(idx)]);
        if (it == id_of.end()) continue;
        rows.push_back(idx);
        out.ids.push_back(it->second);
    }
    out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.X.row(static_cast<Eigen::Index>(r)) = X.row(rows[r]);
    return out;
}

std::string confusion_tsv(const ClassificationReport& report,
                          const std::vector<std::string>& class_names) {
    std::string out = "actual\\predicted";
    for (const std::string& name : class_names) out += '\t' + name;
    out += '\n';
    for (int r = 0; r < static_cast<int>(class_names.size()); ++r) {
        out += class_names[static_cast<std::size_t>(r)];
        for (int c = 0; c < static_cast<int>(class_names.size()); ++c)
            out += '\t' + std::to_string(report.confusion(r, c));
        out += '\n';
    }
    return out;
}

json classification_json(const ClassificationReport& report,
                         const std::vector<std::string>& class_names, int min_class_size) {
    json per_class = json::object();
    json small = json::array();
    for (int c = 0; c < static_cast<int>(class_names.size()); ++c) {
        per_class[class_names[static_cast<std::size_t>(c)]] = report.per_class_accuracy[c];
        if (report.confusion.row(c).sum() < min_class_size)
            small.push_back(class_names[static_cast<std::size_t>(c)]);
    }
    return json{{"n", report.n},
                {"accuracy", report.accuracy},
                {"majority_baseline", report.majority_baseline},
                {"p_value", report.p_value},
                {"degenerate_p", report.degenerate_p},
                {"per_class_accuracy", per_class},
                {"small_classes", small}};
}

std::string sanitize_source(const std::string& source) {
    std::string out;
    for (char c : source)
        if (c != ':') out.push_back(c);
    return out;
}

std::vector<std::string> feature_labels(const Dataset& dataset, const std::string& feature) {
    std::vector<std::string> labels(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        auto value = feature_value(dataset.features[i], feature);
        labels[i] = value.value_or("");
    }
    return labels;
}

std::vector<std::string> shift_feature_labels(const ShiftVectorSet& set,
                                              const std::string& feature) {
    std::vector<std::string> labels(set.labels.size());
    for (std::size_t i = 0; i < set.labels.size(); ++i) {
        if (feature == "case") {
            labels[i] = set.labels[i].case_label;
        } else if (feature == "gender3" || feature == "gender5") {
            labels[i] = set.labels[i].gender_label;
        } else if (feature == "pos") {
            labels[i] = set.labels[i].pos_label;
        } else {
            raise(Err::UnknownFeature,
                  "shift vectors carry case, gender and pos labels; \"" + feature +
                      "\" is not available");
        }
    }
    return labels;
}

std::vector<int> clipped_sweep_dims(const ExperimentConfig& config, int p, Diag* diag) {
    std::vector<int> dims = config.sweep_dims.empty() ? default_sweep_dims() : config.sweep_dims;
    std::vector<int> usable;
    for (int d : dims)
        if (d <= p) usable.push_back(d);
    if (usable.size() < dims.size())
        warn(diag, "semspace", "sweep_dims_clipped",
             "kept " + std::to_string(usable.size()) + " of " + std::to_string(dims.size()) +
                 " grid points with d <= " + std::to_string(p));
    if (usable.empty()) raise(Err::ShapeMismatch, "no sweep dimension fits the data");
    return usable;
}

} // namespace

void cmd_ingest(const ExperimentConfig& config, Diag* diag) {
    PipelineData data = ingest_pipeline(config, diag);
    std::filesystem::create_directories(config.out_dir);

    Lexicon joined;
    joined.entries = data.dataset.features;
    joined.provenance = data.lexicon.provenance;
    std::ostringstream words;
    serialize_lexicon(joined, words);
    write_text_atomic(join_path(config.out_dir, "words.tsv"), words.str());
    save_matrix(join_path(config.out_dir, "S.mat"), data.dataset.S);

    json report{{"lexicon_rows", data.raw_rows},
                {"dropped_syncretic", data.dropped_syncretic},
                {"unique_words", data.lexicon.entries.size()},
                {"embedding_words", data.table.size()},
                {"dim", data.table.dim},
                {"joined_words", data.dataset.size()},
                {"missing_vectors", data.missing_vectors},
                {"feature_violations", data.violations}};
    write_json_file(join_path(config.out_dir, "ingest_report.json"), report);
}

void cmd_train(const ExperimentConfig& config, Diag* diag) {
    if (config.heldout < 1) raise(Err::IoError, "config: train needs heldout >= 1");
    PipelineData data = ingest_pipeline(config, diag);
    const Dataset& dataset = data.dataset;
    const Metric metric = metric_from_string(config.metric);

    SplitResult split =
        split_heldout(dataset, config.heldout, derive_seed(config.seed, kSeedStreamSplit), diag);
    std::vector<int> train_ids;
    {
        std::vector<char> in_test(dataset.size(), 0);
        for (int id : split.test_ids) in_test[static_cast<std::size_t>(id)] = 1;
        for (std::size_t i = 0; i < dataset.size(); ++i)
            if (!in_test[i]) train_ids.push_back(static_cast<int>(i));
    }

    CueMatrix C_full = build_cue_matrix(dataset.words, config.gram_order);
    MappingPair pair_full = train_endstate(C_full, dataset.S, config.ridge);
    CueMatrix C_train = build_cue_matrix(split.train.words, config.gram_order);
    MappingPair pair_train = train_endstate(C_train, split.train.S, config.ridge);

    // comprehension: always judged against the full gold matrix
    std::vector<int> identity(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) identity[i] = static_cast<int>(i);
    ComprehensionReport comp_full =
        evaluate_comprehension(C_full.dense() * pair_full.F, dataset.S, identity, metric);
    ComprehensionReport comp_train = evaluate_comprehension(
        C_train.dense() * pair_train.F, dataset.S, train_ids, metric);
    ComprehensionReport comp_test = evaluate_comprehension(
        encode_rows(split.test.words, C_train.index, config.gram_order) * pair_train.F,
        dataset.S, split.test_ids, metric);

    ProductionOptions options;
    options.theta = config.theta;
    options.beam = config.beam;
    options.max_len = config.max_len;
    options.metric = metric;
    options.vocabulary = &data.lexicon;
    ProductionReport prod_full =
        evaluate_production(dataset, pair_full, C_full.index, config.gram_order, options);
    ProductionReport prod_train =
        evaluate_production(split.train, pair_train, C_train.index, config.gram_order, options);
    // held-out feedback defaults to the mapping trained on train + test
    ProductionOptions heldout_options = options;
    if (!config.strict_heldout_feedback) {
        heldout_options.feedback_F = &pair_full.F;
        heldout_options.feedback_index = &C_full.index;
    }
    ProductionReport prod_test = evaluate_production(split.test, pair_train, C_train.index,
                                                     config.gram_order, heldout_options);

    std::filesystem::create_directories(config.out_dir);
    save_matrix(join_path(config.out_dir, "F.mat"), pair_full.F);
    save_matrix(join_path(config.out_dir, "G.mat"), pair_full.G);
    json sidecar = mapping_sidecar(config, C_full.index);
    write_json_file(join_path(config.out_dir, "F.mat.json"), sidecar);
    write_json_file(join_path(config.out_dir, "G.mat.json"), sidecar);

    std::ostringstream grams, cues;
    write_gram_index(C_full.index, grams);
    write_cue_triplets(C_full, cues);
    write_text_atomic(join_path(config.out_dir, "gram_index.tsv"), grams.str());
    write_text_atomic(join_path(config.out_dir, "cues.tsv"), cues.str());

    std::string heldout = "word\n";
    for (const std::string& word : split.test.words) heldout += word + '\n';
    write_text_atomic(join_path(config.out_dir, "heldout.tsv"), heldout);

    auto train_words = split.train.words;
    write_text_atomic(join_path(config.out_dir, "comprehension_full.tsv"),
                      comprehension_tsv(comp_full, dataset.words, dataset.words));
    write_text_atomic(join_path(config.out_dir, "comprehension_train.tsv"),
                      comprehension_tsv(comp_train, train_words, dataset.words));
    write_text_atomic(join_path(config.out_dir, "comprehension_test.tsv"),
                      comprehension_tsv(comp_test, split.test.words, dataset.words));
    write_text_atomic(join_path(config.out_dir, "production_full.tsv"),
                      production_tsv(prod_full));
    write_text_atomic(join_path(config.out_dir, "production_train.tsv"),
                      production_tsv(prod_train));
    write_text_atomic(join_path(config.out_dir, "production_test.tsv"),
                      production_tsv(prod_test));

    json summary{{"n", json{{"full", dataset.size()},
                            {"train", split.train.size()},
                            {"test", split.test.size()}}},
                 {"grams", C_full.cols()},
                 {"comprehension", json{{"full", comp_full.accuracy},
                                        {"train", comp_train.accuracy},
                                        {"test", comp_test.accuracy}}},
                 {"production", json{{"full", prod_full.accuracy},
                                     {"train", prod_train.accuracy},
                                     {"test", prod_test.accuracy}}},
                 {"metric", config.metric},
                 {"ridge", config.ridge},
                 {"theta", config.theta},
                 {"beam", config.beam},
                 {"gram_order", config.gram_order},
                 {"seed", config.seed},
                 {"strict_heldout_feedback", config.strict_heldout_feedback}};
    write_json_file(join_path(config.out_dir, "train_summary.json"), summary);
}

void cmd_eval(const ExperimentConfig& config, Diag* diag) {
    PipelineData data = ingest_pipeline(config, diag);
    const Dataset& dataset = data.dataset;
    const Metric metric = metric_from_string(config.metric);

    std::ifstream gram_in(join_path(config.out_dir, "gram_index.tsv"));
    if (!gram_in)
        raise(Err::EmptyInput, "no gram_index.tsv under " + config.out_dir + "; run train first");
    GramIndex index = read_gram_index(gram_in);
    Eigen::MatrixXd F = load_matrix(join_path(config.out_dir, "F.mat"));
    Eigen::MatrixXd G = load_matrix(join_path(config.out_dir, "G.mat"));

    try {
        json sidecar = json::parse(read_text_file(join_path(config.out_dir, "F.mat.json")));
        if (sidecar.contains("gram_index_hash") &&
            sidecar.at("gram_index_hash").get<std::string>() != hash_hex(gram_index_hash(index)))
            raise(Err::IoError, "gram index does not match the persisted mapping");
    } catch (const json::exception& e) {
        raise(Err::IoError, std::string("cannot read mapping sidecar: ") + e.what());
    }
    if (F.rows() != index.size() || G.cols() != index.size())
        raise(Err::ShapeMismatch, "persisted mapping does not fit the gram index");
    if (F.cols() != dataset.S.cols())
        raise(Err::ShapeMismatch, "persisted mapping dimension differs from the embeddings");

    std::vector<int> identity(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) identity[i] = static_cast<int>(i);
    ComprehensionReport comp = evaluate_comprehension(
        encode_rows(dataset.words, index, config.gram_order) * F, dataset.S, identity, metric);

    MappingPair pair;
    pair.F = std::move(F);
    pair.G = std::move(G);
    pair.ridge = config.ridge;
    ProductionOptions options;
    options.theta = config.theta;
    options.beam = config.beam;
    options.max_len = config.max_len;
    options.metric = metric;
    options.vocabulary = &data.lexicon;
    ProductionReport prod = evaluate_production(dataset, pair, index, config.gram_order, options);

    write_text_atomic(join_path(config.out_dir, "comprehension_eval.tsv"),
                      comprehension_tsv(comp, dataset.words, dataset.words));
    write_text_atomic(join_path(config.out_dir, "production_eval.tsv"), production_tsv(prod));
    json summary{{"n", dataset.size()},
                 {"comprehension", comp.accuracy},
                 {"production", prod.accuracy},
                 {"metric", config.metric}};
    write_json_file(join_path(config.out_dir, "eval_summary.json"), summary);
}

void cmd_classify(const ExperimentConfig& config, const std::string& feature,
                  const std::string& source, Diag* diag) {
    if (std::find(feature_columns().begin(), feature_columns().end(), feature) ==
        feature_columns().end())
        raise(Err::UnknownFeature, "no feature column named \"" + feature + "\"");
    PipelineData data = ingest_pipeline(config, diag);

    Eigen::MatrixXd X;
    std::vector<std::string> labels;
    if (source == "shifts") {
        ShiftVectorSet set = shift_vectors(data.dataset, diag);
        X = std::move(set.rows);
        labels = shift_feature_labels(set, feature);
    } else if (source == "embeddings" || source.rfind("pca:", 0) == 0) {
        X = data.dataset.S;
        labels = feature_labels(data.dataset, feature);
    } else {
        raise(Err::UnknownFeature, "source must be embeddings, shifts or pca:<d>");
    }

    LabeledMatrix lm = label_rows(X, labels, diag);
    if (source.rfind("pca:", 0) == 0) {
        int d = 0;
        try {
            d = std::stoi(source.substr(4));
        } catch (const std::exception&) {
            raise(Err::UnknownFeature, "bad pca source \"" + source + "\"");
        }
        PCAModel pca = fit_pca(lm.X);
        lm.X = pca_project(pca, lm.X, d);
    }

    ClassificationReport report = loocv_lda(lm.X, lm.ids, config.lambda);

    std::filesystem::create_directories(config.out_dir);
    std::string stem = feature + "_" + sanitize_source(source);
    write_text_atomic(join_path(config.out_dir, "confusion_" + stem + ".tsv"),
                      confusion_tsv(report, lm.class_names));
    json doc = classification_json(report, lm.class_names, config.min_class_size);
    doc["feature"] = feature;
    doc["source"] = source;
    doc["n_total"] = lm.total;
    doc["dropped_missing"] = lm.dropped_missing;
    doc["dropped_small_classes"] = lm.dropped_small;
    write_json_file(join_path(config.out_dir, "classify_" + stem + ".json"), doc);
}

void cmd_sweep(const ExperimentConfig& config, const std::string& feature, Diag* diag) {
    if (std::find(feature_columns().begin(), feature_columns().end(), feature) ==
        feature_columns().end())
        raise(Err::UnknownFeature, "no feature column named \"" + feature + "\"");
    PipelineData data = ingest_pipeline(config, diag);

    LabeledMatrix lm = label_rows(data.dataset.S, feature_labels(data.dataset, feature), diag);
    std::vector<int> dims = clipped_sweep_dims(config, static_cast<int>(lm.X.cols()), diag);
    std::vector<std::pair<int, double>> curve = pca_sweep_lda(lm.X, lm.ids, dims, config.lambda);

    std::filesystem::create_directories(config.out_dir);
    std::string tsv = "n_components\taccuracy\n";
    json points = json::array();
    for (const auto& [d, accuracy] : curve) {
        tsv += std::to_string(d) + '\t' + num(accuracy) + '\n';
        points.push_back(json{{"n_components", d}, {"accuracy", accuracy}});
    }
    write_text_atomic(join_path(config.out_dir, "sweep_" + feature + ".tsv"), tsv);
    write_json_file(join_path(config.out_dir, "sweep_" + feature + ".json"),
                    json{{"feature", feature},
                         {"n", lm.ids.size()},
                         {"lambda", config.lambda},
                         {"curve", points}});
}

void cmd_shifts(const ExperimentConfig& config, Diag* diag) {
    PipelineData data = ingest_pipeline(config, diag);
    ShiftVectorSet set = shift_vectors(data.dataset, diag);

    std::filesystem::create_directories(config.out_dir);
    std::string tsv = "singular\tplural\tcase\tgender\tpos";
    for (Eigen::Index d = 0; d < set.rows.cols(); ++d) tsv += "\tv" + std::to_string(d);
    tsv += '\n';
    for (std::size_t r = 0; r < set.labels.size(); ++r) {
        auto [sg, pl] = set.pair_ids[r];
        tsv += data.dataset.words[static_cast<std::size_t>(sg)] + '\t' +
               data.dataset.words[static_cast<std::size_t>(pl)] + '\t' +
               set.labels[r].case_label + '\t' + set.labels[r].gender_label + '\t' +
               set.labels[r].pos_label;
        for (Eigen::Index d = 0; d < set.rows.cols(); ++d)
            tsv += '\t' + num(set.rows(static_cast<Eigen::Index>(r), d));
        tsv += '\n';
    }
    write_text_atomic(join_path(config.out_dir, "shifts.tsv"), tsv);
    write_json_file(join_path(config.out_dir, "shifts_summary.json"),
                    json{{"pairs", set.labels.size()}, {"dim", set.rows.cols()}});
}

void cmd_tsne(const ExperimentConfig& config, const std::string& source, Diag* diag) {
    PipelineData data = ingest_pipeline(config, diag);

    TsneOptions options;
    options.perplexity = config.tsne_perplexity;
    options.iterations = config.tsne_iterations;
    options.seed = derive_seed(config.seed, kSeedStreamTsne);

    std::filesystem::create_directories(config.out_dir);
    std::string tsv;
    if (source == "shifts") {
        ShiftVectorSet set = shift_vectors(data.dataset, diag);
        Eigen::MatrixXd coords = tsne(set.rows, options, nullptr);
        tsv = "word\tx\ty\tcase\tgender\tpos\n";
        for (std::size_t i = 0; i < set.labels.size(); ++i) {
            auto [sg, pl] = set.pair_ids[i];
            tsv += data.dataset.words[static_cast<std::size_t>(sg)] + ">" +
                   data.dataset.words[static_cast<std::size_t>(pl)] + '\t' +
                   num(coords(static_cast<Eigen::Index>(i), 0)) + '\t' +
                   num(coords(static_cast<Eigen::Index>(i), 1)) + '\t' +
                   set.labels[i].case_label + '\t' + set.labels[i].gender_label + '\t' +
                   set.labels[i].pos_label + '\n';
        }
    } else if (source == "embeddings") {
        Eigen::MatrixXd coords = tsne(data.dataset.S, options, nullptr);
        tsv = "word\tx\ty";
        for (const std::string& column : feature_columns()) tsv += '\t' + column;
        tsv += '\n';
        for (std::size_t i = 0; i < data.dataset.size(); ++i) {
            tsv += data.dataset.words[i] + '\t' + num(coords(static_cast<Eigen::Index>(i), 0)) +
                   '\t' + num(coords(static_cast<Eigen::Index>(i), 1));
            for (const std::string& column : feature_columns())
                tsv += '\t' + feature_value(data.dataset.features[i], column).value_or("");
            tsv += '\n';
        }
    } else {
        raise(Err::UnknownFeature, "tsne source must be embeddings or shifts");
    }
    write_text_atomic(join_path(config.out_dir, "tsne.tsv"), tsv);
}

void cmd_plot(const ExperimentConfig& config, const std::string& points_path,
              const std::string& label_column, Diag* diag) {
    (void)diag;
    std::ifstream in(points_path);
    if (!in) raise(Err::EmptyInput, "cannot open points file " + points_path);

    std::string line;
    if (!std::getline(in, line)) raise(Err::EmptyInput, "points file has no header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                header.push_back(line.substr(start));
                break;
            }
            header.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
    }
    auto column_of = [&header](const std::string& name) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return static_cast<int>(c);
        return -1;
    };
    int x_col = column_of("x"), y_col = column_of("y");
    if (x_col < 0 || y_col < 0) raise(Err::MissingColumn, "points file needs x and y columns");
    int label_col = -1;
    if (!label_column.empty()) {
        label_col = column_of(label_column);
        if (label_col < 0) raise(Err::MissingColumn, "no column named " + label_column);
    } else {
        label_col = column_of("label");
    }

    std::vector<double> xs, ys;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        cells.resize(header.size());
        char* end = nullptr;
        double x = std::strtod(cells[static_cast<std::size_t>(x_col)].c_str(), &end);
        double y = std::strtod(cells[static_cast<std::size_t>(y_col)].c_str(), &end);
        xs.push_back(x);
        ys.push_back(y);
        labels.push_back(label_col >= 0 ? cells[static_cast<std::size_t>(label_col)] : "all");
    }

    Eigen::MatrixXd coords(static_cast<Eigen::Index>(xs.size()), 2);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        coords(static_cast<Eigen::Index>(i), 0) = xs[i];
        coords(static_cast<Eigen::Index>(i), 1) = ys[i];
    }
    std::filesystem::create_directories(config.out_dir);
    write_text_atomic(join_path(config.out_dir, "scatter.svg"), emit_scatter(coords, labels));
}

} // namespace dlm
