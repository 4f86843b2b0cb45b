#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dlm {

/// Declarative experiment bundle. Loaded from a JSON file; command-line flags
/// override individual fields. All randomness fans out from `seed`.
struct ExperimentConfig {
    std::string lexicon_path;
    std::string embeddings_path;
    std::string out_dir = "out";

    int gram_order = 3;
    double ridge = 0.0;
    double theta = 0.01;
    int beam = 20;
    int max_len = 30;
    std::string metric = "pearson";
    double lambda = 0.01;
    int heldout = 400;
    std::uint64_t seed = 1;
    std::vector<int> sweep_dims; // empty = default grid clipped to the data
    double tsne_perplexity = 30.0;
    int tsne_iterations = 1000;
    bool strict_heldout_feedback = false;
    std::optional<int> expected_dim;
    int min_class_size = 10;
};

// stream ids for derive_seed
constexpr std::uint64_t kSeedStreamSplit = 1;
constexpr std::uint64_t kSeedStreamTsne = 2;

ExperimentConfig load_config(const std::string& path);

/// Range checks for every numeric setting; raises on violations.
void validate_config(const ExperimentConfig& config);

} // namespace dlm
