#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mzcg/config.hpp"

namespace mzcg {

struct ExperimentResult {
    std::vector<std::filesystem::path> files;
    KeyValues summary;  // also written to the CSV metadata as summary.<key>
    bool blowup = false;
    std::string message;
};

ExperimentResult run_landscape(const ExperimentConfig& cfg);
ExperimentResult run_kernel(const ExperimentConfig& cfg);
ExperimentResult run_kernel_matrix(const ExperimentConfig& cfg);
ExperimentResult run_mean_trajectory(const ExperimentConfig& cfg);
ExperimentResult run_ensemble(const ExperimentConfig& cfg);
ExperimentResult run_stationary(const ExperimentConfig& cfg);

// Dispatches on cfg.experiment.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// "<stem><suffix><ext>" next to `path`, e.g. out.csv -> out_beta10.csv.
std::filesystem::path with_suffix(const std::filesystem::path& path, const std::string& suffix);

}  // namespace mzcg
