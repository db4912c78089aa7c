#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mzcg/benchmark_model.hpp"
#include "mzcg/effective_models.hpp"
#include "mzcg/sde_engine.hpp"

namespace mzcg {

enum class Experiment { Landscape, Kernel, KernelMatrix, MeanTrajectory, Ensemble, Stationary };

std::string_view experiment_name(Experiment e);
Experiment parse_experiment(std::string_view name);  // throws ConfigError

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct ExperimentConfig {
    Experiment experiment = Experiment::Landscape;
    bool desk_scale = false;
    BenchmarkParams params;
    IntegratorConfig integrator;
    std::size_t n_samples = 1;
    std::uint64_t master_seed = 20190417;
    double x0 = 0.0;
    std::filesystem::path output_path;
    std::vector<ModelKind> models;
    std::vector<double> beta_list;
    unsigned threads = 1;  // never written to output; results do not depend on it

    // kernel, kernel-matrix
    std::size_t n_lags = 60;
    double kernel_dt = 0.0;  // 0 selects 1e-4 / lambda

    // landscape
    double grid_min = -3.0;
    double grid_max = 3.0;
    std::size_t grid_points = 301;

    // stationary
    std::size_t bins = 101;
    double burn_in = 10.0;

    // Built-in defaults for `e`; `desk_scale` swaps in the cheaper settings.
    static ExperimentConfig defaults(Experiment e, bool desk_scale);

    // Applies one key=value override. Throws ConfigError for unknown keys or
    // unparsable values.
    void set(std::string_view key, std::string_view value);

    // Every configurable key with its resolved value, in a fixed order.
    KeyValues resolved() const;

    // Checks the experiment-specific invariants; throws ConfigError.
    void validate() const;
};

// Flat key=value text: one pair per line, '#' starts a comment, blank lines ignored.
KeyValues parse_key_values(std::string_view text);
KeyValues read_config_file(const std::filesystem::path& path);  // IoError / ConfigError

// Parses "key=value" as given on the command line.
std::pair<std::string, std::string> parse_assignment(std::string_view text);

// Resolution order: defaults < desk-scale < file < overrides.
ExperimentConfig resolve_config(Experiment e, bool desk_scale, const KeyValues& file_values,
                                const KeyValues& overrides);

std::string format_double(double v);  // 17 significant digits

}  // namespace mzcg
