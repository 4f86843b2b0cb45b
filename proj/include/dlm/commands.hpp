#pragma once

#include <string>

#include "dlm/config.hpp"
#include "dlm/diag.hpp"

namespace dlm {

// Batch subcommands behind the CLI. Each one reads the inputs named in the
// config, writes its reports under config.out_dir atomically, and raises
// dlm::Error on any module failure.

void cmd_ingest(const ExperimentConfig& config, Diag* diag = nullptr);
void cmd_train(const ExperimentConfig& config, Diag* diag = nullptr);
void cmd_eval(const ExperimentConfig& config, Diag* diag = nullptr);
void cmd_classify(const ExperimentConfig& config, const std::string& feature,
                  const std::string& source, Diag* diag = nullptr);
void cmd_sweep(const ExperimentConfig& config, const std::string& feature, Diag* diag = nullptr);
void cmd_shifts(const ExperimentConfig& config, Diag* diag = nullptr);
void cmd_tsne(const ExperimentConfig& config, const std::string& source, Diag* diag = nullptr);
void cmd_plot(const ExperimentConfig& config, const std::string& points_path,
              const std::string& label_column, Diag* diag = nullptr);

} // namespace dlm
