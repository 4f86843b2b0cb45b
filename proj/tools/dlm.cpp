#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dlm/commands.hpp"
#include "dlm/config.hpp"
#include "dlm/diag.hpp"
#include "dlm/errors.hpp"

namespace {

// Flag overrides; flags win over the config file.
struct Overrides {
    std::optional<std::string> lexicon, embeddings, out, metric;
    std::optional<double> ridge, theta, lambda, perplexity;
    std::optional<int> gram_order, beam, max_len, heldout, iterations, min_class_size,
        expected_dim;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<int>> sweep_dims;
    bool strict_heldout_feedback = false;
};

void add_common_flags(CLI::App* cmd, std::string& config_path, Overrides& over) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--lexicon", over.lexicon, "lexicon TSV path");
    cmd->add_option("--embeddings", over.embeddings, "embedding text file path");
    cmd->add_option("--out", over.out, "output directory");
    cmd->add_option("--seed", over.seed, "master seed");
    cmd->add_option("--metric", over.metric, "similarity metric: pearson or cosine");
    cmd->add_option("--ridge", over.ridge, "ridge regularization weight");
    cmd->add_option("--theta", over.theta, "support threshold for synthesis");
    cmd->add_option("--beam", over.beam, "beam width for synthesis");
    cmd->add_option("--lambda", over.lambda, "LDA covariance shrinkage in [0,1]");
    cmd->add_option("--gram-order", over.gram_order, "n-gram order");
    cmd->add_option("--max-len", over.max_len, "maximum synthesized word length");
    cmd->add_option("--heldout", over.heldout, "held-out test set size");
    cmd->add_option("--perplexity", over.perplexity, "t-SNE perplexity");
    cmd->add_option("--iterations", over.iterations, "t-SNE iterations");
    cmd->add_option("--min-class-size", over.min_class_size,
                    "classes smaller than this are flagged in reports");
    cmd->add_option("--expected-dim", over.expected_dim, "required embedding dimension");
    cmd->add_option("--sweep-dims", over.sweep_dims, "PCA sweep grid");
    cmd->add_flag("--strict-heldout-feedback", over.strict_heldout_feedback,
                  "feedback loop uses the train-only mapping for held-out words");
}

dlm::ExperimentConfig resolve_config(const std::string& config_path, const Overrides& over) {
    dlm::ExperimentConfig config;
    if (!config_path.empty()) config = dlm::load_config(config_path);
    if (over.lexicon) config.lexicon_path = *over.lexicon;
    if (over.embeddings) config.embeddings_path = *over.embeddings;
    if (over.out) config.out_dir = *over.out;
    if (over.seed) config.seed = *over.seed;
    if (over.metric) config.metric = *over.metric;
    if (over.ridge) config.ridge = *over.ridge;
    if (over.theta) config.theta = *over.theta;
    if (over.lambda) config.lambda = *over.lambda;
    if (over.gram_order) config.gram_order = *over.gram_order;
    if (over.beam) config.beam = *over.beam;
    if (over.max_len) config.max_len = *over.max_len;
    if (over.heldout) config.heldout = *over.heldout;
    if (over.perplexity) config.tsne_perplexity = *over.perplexity;
    if (over.iterations) config.tsne_iterations = *over.iterations;
    if (over.min_class_size) config.min_class_size = *over.min_class_size;
    if (over.expected_dim) config.expected_dim = *over.expected_dim;
    if (over.sweep_dims) config.sweep_dims = *over.sweep_dims;
    if (over.strict_heldout_feedback) config.strict_heldout_feedback = true;
    return config;
}

void flush_diagnostics(const dlm::Diag& diag) {
    for (const auto& item : diag.items) {
        nlohmann::json line{{"level", "warning"},
                            {"module", item.module},
                            {"event", item.event},
                            {"count", item.count}};
        if (!item.detail.empty()) line["detail"] = item.detail;
        std::cerr << line.dump() << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discriminative lexicon toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides over;
    std::string feature;
    std::string source = "embeddings";
    std::string points_path;
    std::string label_column;

    CLI::App* ingest = app.add_subcommand("ingest", "parse and join the inputs");
    CLI::App* train = app.add_subcommand("train", "learn the form-meaning mappings and evaluate");
    CLI::App* eval = app.add_subcommand("eval", "evaluate a persisted mapping");
    CLI::App* classify =
        app.add_subcommand("classify", "LOOCV LDA over a feature column");
    CLI::App* sweep = app.add_subcommand("sweep", "LOOCV accuracy over PCA truncations");
    CLI::App* shifts = app.add_subcommand("shifts", "plural-minus-singular shift vectors");
    CLI::App* tsne = app.add_subcommand("tsne", "2-D embedding of the semantic space");
    CLI::App* plot = app.add_subcommand("plot", "SVG scatterplot from a points TSV");

    for (CLI::App* cmd : {ingest, train, eval, classify, sweep, shifts, tsne, plot})
        add_common_flags(cmd, config_path, over);
    classify->add_option("--feature", feature, "label column to predict")->required();
    classify->add_option("--source", source, "embeddings, shifts or pca:<d>");
    sweep->add_option("--feature", feature, "label column to predict")->required();
    tsne->add_option("--source", source, "embeddings or shifts");
    plot->add_option("--points", points_path, "TSV with x and y columns")->required();
    plot->add_option("--label", label_column, "label column for colour coding");

    CLI11_PARSE(app, argc, argv);

    dlm::Diag diag;
    try {
        dlm::ExperimentConfig config = resolve_config(config_path, over);
        if (ingest->parsed()) dlm::cmd_ingest(config, &diag);
        if (train->parsed()) dlm::cmd_train(config, &diag);
        if (eval->parsed()) dlm::cmd_eval(config, &diag);
        if (classify->parsed()) dlm::cmd_classify(config, feature, source, &diag);
        if (sweep->parsed()) dlm::cmd_sweep(config, feature, &diag);
        if (shifts->parsed()) dlm::cmd_shifts(config, &diag);
        if (tsne->parsed()) dlm::cmd_tsne(config, source, &diag);
        if (plot->parsed()) dlm::cmd_plot(config, points_path, label_column, &diag);
    } catch (const dlm::Error& e) {
        flush_diagnostics(diag);
        std::cerr << nlohmann::json{{"level", "error"}, {"error", e.name()}, {"message", e.what()}}
                         .dump()
                  << '\n';
        return 2;
    } catch (const std::exception& e) {
        flush_diagnostics(diag);
        std::cerr << nlohmann::json{{"level", "error"}, {"error", "Unexpected"}, {"message", e.what()}}
                         .dump()
                  << '\n';
        return 3;
    }
    flush_diagnostics(diag);
    return 0;
}
