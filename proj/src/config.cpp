#include "dlm/config.hpp"

#include "json.hpp"

#include <fstream>

#include "dlm/errors.hpp"

namespace dlm {

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Err::EmptyInput, "cannot open config file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        raise(Err::IoError, "config " + path + " is not valid JSON: " + e.what());
    }

    ExperimentConfig config;
    auto get = [&doc](const char* key, auto& field) {
        if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("lexicon", config.lexicon_path);
    get("embeddings", config.embeddings_path);
    get("out", config.out_dir);
    get("gram_order", config.gram_order);
    get("ridge", config.ridge);
    get("theta", config.theta);
    get("beam", config.beam);
    get("max_len", config.max_len);
    get("metric", config.metric);
    get("lambda", config.lambda);
    get("heldout", config.heldout);
    get("seed", config.seed);
    get("sweep_dims", config.sweep_dims);
    get("strict_heldout_feedback", config.strict_heldout_feedback);
    get("min_class_size", config.min_class_size);
    if (doc.contains("expected_dim")) config.expected_dim = doc.at("expected_dim").get<int>();
    if (doc.contains("tsne")) {
        const auto& t = doc.at("tsne");
        if (t.contains("perplexity")) config.tsne_perplexity = t.at("perplexity").get<double>();
        if (t.contains("iterations")) config.tsne_iterations = t.at("iterations").get<int>();
    }
    return config;
}

void validate_config(const ExperimentConfig& config) {
    auto fail = [](const std::string& msg) { raise(Err::IoError, "config: " + msg); };
    if (config.gram_order < 2) fail("gram_order must be at least 2");
    if (config.ridge < 0.0) fail("ridge must be non-negative");
    if (config.beam < 1) fail("beam must be positive");
    if (config.max_len < 1) fail("max_len must be positive");
    if (config.metric != "pearson" && config.metric != "cosine")
        fail("metric must be pearson or cosine");
    if (config.lambda < 0.0 || config.lambda > 1.0) fail("lambda must lie in [0,1]");
    if (config.heldout < 0) fail("heldout must be non-negative");
    if (config.tsne_perplexity <= 1.0) fail("tsne perplexity must exceed 1");
    if (config.tsne_iterations < 1) fail("tsne iterations must be positive");
    if (config.min_class_size < 0) fail("min_class_size must be non-negative");
    for (int d : config.sweep_dims)
        if (d < 1) fail("sweep dimensions must be positive");
    if (config.expected_dim && *config.expected_dim < 1) fail("expected_dim must be positive");
}

} // namespace dlm
