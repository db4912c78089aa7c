// mzcg: runs the coarse-graining experiments and writes CSV output.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mzcg/config.hpp"
#include "mzcg/error.hpp"
#include "mzcg/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mori-Zwanzig coarse-graining experiments for the winding-valley benchmark"};
    std::string experiment;
    std::string config_path;
    std::vector<std::string> assignments;
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool desk_scale = false;

    app.add_option("experiment", experiment,
                   "landscape | kernel | kernel-matrix | mean-trajectory | ensemble | stationary")
        ->required();
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--set", assignments, "override a configuration key (key=value)");
    app.add_option("--out", out, "output CSV path");
    auto* seed_opt = app.add_option("--seed", seed, "master seed");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--desk-scale", desk_scale, "cheaper defaults (dt=1e-4, shorter horizons, 200 runs)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const auto kind = mzcg::parse_experiment(experiment);
        mzcg::KeyValues file_values;
        if (!config_path.empty()) {
            try {
                file_values = mzcg::read_config_file(config_path);
            } catch (const mzcg::IoError& e) {
                throw mzcg::ConfigError(e.what());
            }
        }
        mzcg::KeyValues overrides;
        for (const auto& a : assignments) overrides.push_back(mzcg::parse_assignment(a));
        if (!out.empty()) overrides.emplace_back("out", out);
        if (seed_opt->count()) overrides.emplace_back("seed", std::to_string(seed));
        if (threads_opt->count()) overrides.emplace_back("threads", std::to_string(threads));

        const auto cfg = mzcg::resolve_config(kind, desk_scale, file_values, overrides);
        if (auto note = cfg.params.advisory()) std::cerr << "warning: " << *note << '\n';

        const auto result = mzcg::run_experiment(cfg);
        for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
        for (const auto& [k, v] : result.summary) std::cout << k << " = " << v << '\n';
        if (result.blowup) {
            std::cerr << "numerical blowup: " << result.message << '\n';
            return kExitBlowup;
        }
        return 0;
    } catch (const mzcg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const mzcg::NumericalBlowup& e) {
        std::cerr << "numerical blowup: " << e.what() << '\n';
        return kExitBlowup;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
