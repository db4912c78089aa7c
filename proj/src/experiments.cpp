#include "mzcg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "mzcg/csv.hpp"
#include "mzcg/error.hpp"
#include "mzcg/memory_kernel.hpp"
#include "mzcg/numerics.hpp"
#include "mzcg/parallel.hpp"

namespace mzcg {

namespace {

std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string optional_time(const std::optional<double>& t) {
    return t ? format_double(*t) : std::string("not_reached");
}

void finish(CsvDocument& doc, ExperimentResult& result, const std::filesystem::path& path,
            const KeyValues& summary, bool blowup, const std::string& message) {
    doc.meta("status", blowup ? "blowup" : "ok");
    if (blowup) doc.meta("blowup", message);
    for (const auto& [k, v] : summary) doc.meta("summary." + k, v);
    doc.write(path);
    result.files.push_back(path);
    result.summary.insert(result.summary.end(), summary.begin(), summary.end());
    if (blowup) {
        result.blowup = true;
        if (!result.message.empty()) result.message += "; ";
        result.message += message;
    }
}

struct Batch {
    std::vector<Trajectory> runs;
    std::optional<std::string> blowup;
};

// Runs `simulate(i)` for every index, keeping partial trajectories of runs
// that blew up and trimming all runs to the shortest common prefix.
template <class Simulate>
Batch run_batch(std::size_t n, unsigned threads, const std::string& label, Simulate&& simulate) {
    Batch batch;
    batch.runs.resize(n);
    std::vector<std::optional<std::size_t>> failed(n);
    parallel_for(n, threads, [&](std::size_t i) {
        try {
            batch.runs[i] = simulate(i);
        } catch (const TrajectoryBlowup& e) {
            batch.runs[i] = e.partial();
            failed[i] = e.step();
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (failed[i]) {
            batch.blowup = label + " run " + std::to_string(i) + " blew up at step " +
                           std::to_string(*failed[i]);
            break;
        }
    }
    if (batch.blowup) {
        std::size_t len = batch.runs.front().size();
        for (const auto& t : batch.runs) len = std::min(len, t.size());
        if (len == 0) throw NumericalBlowup(0, 0, *batch.blowup + " before any sample was recorded");
        for (auto& t : batch.runs) {
            t.times.resize(len);
            t.states.resize(len * t.dim);
        }
    }
    return batch;
}

std::string ensemble_column(ModelKind kind) {
    switch (kind) {
        case ModelKind::MemoryCorrected: return "approx";
        case ModelKind::MemoryFree: return "nomem";
        case ModelKind::NaiveMemory: return "naive";
    }
    return "model";
}

double rms_difference(std::span<const double> a, std::span<const double> b) {
    KahanSum sq;
    for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(sq.value() / static_cast<double>(a.size()));
}

}  // namespace

std::filesystem::path with_suffix(const std::filesystem::path& path, const std::string& suffix) {
    auto name = path.stem().string() + suffix + path.extension().string();
    return path.has_parent_path() ? path.parent_path() / name : std::filesystem::path(name);
}

ExperimentResult run_landscape(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& p = cfg.params;
    CsvDocument doc;
    doc.meta_all(cfg.resolved());
    doc.columns({"x", "y", "V"});
    const double step = (cfg.grid_max - cfg.grid_min) / static_cast<double>(cfg.grid_points - 1);
    for (std::size_t i = 0; i < cfg.grid_points; ++i) {
        const double x = cfg.grid_min + static_cast<double>(i) * step;
        for (std::size_t j = 0; j < cfg.grid_points; ++j) {
            const double y = cfg.grid_min + static_cast<double>(j) * step;
            const double row[] = {x, y, potential(p, x, y)};
            doc.row(row);
        }
    }
    ExperimentResult result;
    finish(doc, result, cfg.output_path, {{"grid_spacing", format_double(step)}}, false, {});
    return result;
}

namespace {

struct KernelRun {
    IntegratorConfig integrator;
    std::vector<double> lags;
};

KernelRun kernel_grid(const ExperimentConfig& cfg, double x0) {
    const double dt = cfg.kernel_dt > 0.0 ? cfg.kernel_dt : default_orthogonal_dt(cfg.params);
    KernelRun run;
    run.lags = default_lag_grid(cfg.params, x0, dt, cfg.n_lags);
    run.integrator = IntegratorConfig{dt, run.lags.back(), 1};
    return run;
}

}  // namespace

ExperimentResult run_kernel(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& p = cfg.params;
    const auto grid = kernel_grid(cfg, cfg.x0);
    CsvDocument doc;
    doc.meta_all(cfg.resolved());
    doc.meta("kernel_dt_resolved", grid.integrator.dt);
    doc.columns({"s", "empirical", "stderr", "approx"});
    ExperimentResult result;
    try {
        const auto est = empirical_kernel(p, cfg.x0, grid.lags, cfg.n_samples,
                                          NoiseStream{cfg.master_seed, 0, 0}, grid.integrator,
                                          cfg.threads);
        for (std::size_t j = 0; j < est.lags.size(); ++j) {
            const double row[] = {est.lags[j], est.values[j], est.std_error[j],
                                  approx_kernel(p, est.lags[j], cfg.x0)};
            doc.row(row);
        }
        const auto fit = fit_kernel_decay(est);
        KeyValues summary{
            {"theoretical_decay_rate", format_double(kernel_decay_rate(p, cfg.x0))},
            {"fitted_decay_rate", fit ? format_double(-fit->slope) : std::string("nan")},
            {"fit_points", fit ? std::to_string(fit->points) : std::string("0")},
            {"empirical_at_zero", format_double(est.values.front())},
            {"approx_at_zero", format_double(approx_kernel(p, 0.0, cfg.x0))},
        };
        finish(doc, result, cfg.output_path, summary, false, {});
    } catch (const NumericalBlowup& e) {
        finish(doc, result, cfg.output_path, {}, true, e.what());
    }
    return result;
}

ExperimentResult run_kernel_matrix(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& p = cfg.params;
    Eigen::MatrixXd phi(1, 2);
    phi << 1.0, 0.0;
    const CGMap map = build_cg_map(phi);

    struct Case {
        std::string suffix;
        double x0;
    };
    const Case cases[] = {{"_cos1", 0.0}, {"_cos0", std::numbers::pi / (2.0 * p.omega)}};

    ExperimentResult result;
    for (const auto& c : cases) {
        const auto grid = kernel_grid(cfg, c.x0);
        CsvDocument doc;
        doc.meta_all(cfg.resolved());
        doc.meta("conditioning_x0", c.x0);
        doc.meta("kernel_dt_resolved", grid.integrator.dt);
        doc.columns({"s", "m11", "m12", "m21", "m22", "log_abs_m12"});
        const auto path = with_suffix(cfg.output_path, c.suffix);
        try {
            const auto est = empirical_kernel_matrix(p, map, c.x0, grid.lags, cfg.n_samples,
                                                     NoiseStream{cfg.master_seed, 0, 0},
                                                     grid.integrator, cfg.threads);
            std::vector<double> log_m12(est.lags.size());
            for (std::size_t j = 0; j < est.lags.size(); ++j) {
                const auto& m = est.values[j];
                log_m12[j] = std::log(std::abs(m(0, 1)));
                const double row[] = {est.lags[j], m(0, 0), m(0, 1), m(1, 0), m(1, 1), log_m12[j]};
                doc.row(row);
            }
            KeyValues summary{
                {"log_abs_m12_first", format_double(log_m12.front())},
                {"log_abs_m12_last", format_double(log_m12.back())},
                {"log_abs_m12_drop", format_double(log_m12.front() - log_m12.back())},
            };
            for (auto& [k, v] : summary) k = c.suffix.substr(1) + "." + k;
            finish(doc, result, path, summary, false, {});
        } catch (const NumericalBlowup& e) {
            finish(doc, result, path, {}, true, e.what());
        }
    }
    return result;
}

ExperimentResult run_mean_trajectory(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& p = cfg.params;
    const auto& icfg = cfg.integrator;
    ExperimentResult result;

    auto full = run_batch(cfg.n_samples, cfg.threads, "full dynamics", [&](std::size_t i) {
        NoiseStream stream{cfg.master_seed, i, 0};
        const double y0 = conditional_y_sample(p, cfg.x0, stream);
        return simulate_full(p, {cfg.x0, y0}, icfg, stream, false);
    });
    const auto stats = ensemble_mean(full.runs);
    const std::size_t rows = stats.mean.size();

    KeyValues summary;
    std::vector<std::string> names{"t", "full_mean", "full_stderr"};
    std::vector<std::vector<double>> columns{stats.mean.times, stats.mean.component(0),
                                             std::vector<double>(rows)};
    for (std::size_t k = 0; k < rows; ++k) columns[2][k] = stats.std_error[k * 2];
    summary.emplace_back("time_to_half.full_mean",
                         optional_time(time_to_half(columns[0], columns[1])));

    for (auto kind : cfg.models) {
        const std::string name(model_name(kind));
        Trajectory traj;
        try {
            traj = simulate_scalar({kind, p}, cfg.x0, icfg, NoiseStream{cfg.master_seed, 0, 0},
                                   false);
        } catch (const TrajectoryBlowup& e) {
            traj = e.partial();
            summary.emplace_back("blowup." + name,
                                 "step " + std::to_string(e.step()) + " (last recorded t=" +
                                     (traj.size() ? format_double(traj.times.back())
                                                  : std::string("none")) +
                                     ")");
        }
        std::vector<double> col(rows, std::nan(""));
        const std::size_t n = std::min(rows, traj.size());
        for (std::size_t k = 0; k < n; ++k) col[k] = traj.at(k);
        summary.emplace_back("time_to_half." + name,
                             optional_time(time_to_half(std::span(columns[0]).first(n),
                                                        std::span<const double>(col).first(n))));
        names.push_back(name);
        columns.push_back(std::move(col));
    }

    CsvDocument doc;
    doc.meta_all(cfg.resolved());
    doc.columns(names);
    std::vector<double> row(columns.size());
    for (std::size_t k = 0; k < rows; ++k) {
        for (std::size_t c = 0; c < columns.size(); ++c) row[c] = columns[c][k];
        doc.row(row);
    }
    finish(doc, result, cfg.output_path, summary, full.blowup.has_value(),
           full.blowup.value_or(std::string()));
    return result;
}

ExperimentResult run_ensemble(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& icfg = cfg.integrator;
    const double x0 = cfg.x0;
    ExperimentResult result;

    for (double beta : cfg.beta_list) {
        BenchmarkParams p = cfg.params;
        p.beta = beta;
        const Vec2 start{x0, p.tau * std::sin(p.omega * x0)};

        auto full = run_batch(cfg.n_samples, cfg.threads, "full dynamics", [&](std::size_t i) {
            return simulate_full(p, start, icfg, NoiseStream{cfg.master_seed, i, 0}, true);
        });
        std::vector<Batch> reduced;
        for (auto kind : cfg.models) {
            reduced.push_back(run_batch(cfg.n_samples, cfg.threads, std::string(model_name(kind)),
                                        [&](std::size_t i) {
                                            return simulate_scalar({kind, p}, x0, icfg,
                                                                   NoiseStream{cfg.master_seed, i, 0},
                                                                   true);
                                        }));
        }

        std::size_t rows = full.runs.front().size();
        for (const auto& b : reduced) rows = std::min(rows, b.runs.front().size());
        auto trim = [rows](std::vector<double> v) {
            v.resize(rows);
            return v;
        };

        const auto full_stats = ensemble_mean(full.runs);
        std::vector<double> t = trim(full_stats.mean.times);
        std::vector<double> full_mean = trim(full_stats.mean.component(0));
        std::vector<double> full_se(rows);
        for (std::size_t k = 0; k < rows; ++k) full_se[k] = full_stats.std_error[k * 2];

        std::vector<std::string> names{"t", "full_mean"};
        std::vector<std::vector<double>> means{full_mean};
        std::vector<std::vector<double>> ses{full_se};
        KeyValues summary{{"initial_amplitude", format_double(x0)},
                          {"time_to_half.full_mean", optional_time(time_to_half(t, full_mean))}};
        for (std::size_t m = 0; m < cfg.models.size(); ++m) {
            const auto stats = ensemble_mean(reduced[m].runs);
            const std::string col = ensemble_column(cfg.models[m]);
            names.push_back(col + "_mean");
            means.push_back(trim(stats.mean.states));
            ses.push_back(trim(stats.std_error));
            summary.emplace_back("rms_" + col + "_minus_full",
                                 format_double(rms_difference(means.back(), full_mean)));
            summary.emplace_back("time_to_half." + col + "_mean",
                                 optional_time(time_to_half(t, means.back())));
        }
        names.push_back("full_stderr");
        for (auto kind : cfg.models) names.push_back(ensemble_column(kind) + "_stderr");

        CsvDocument doc;
        auto file_cfg = cfg;
        file_cfg.params.beta = beta;
        doc.meta_all(file_cfg.resolved());
        doc.meta("initial_y", start[1]);
        doc.columns(names);
        std::vector<double> row;
        for (std::size_t k = 0; k < rows; ++k) {
            row.assign({t[k]});
            for (const auto& c : means) row.push_back(c[k]);
            for (const auto& c : ses) row.push_back(c[k]);
            doc.row(row);
        }
        std::optional<std::string> blow = full.blowup;
        for (const auto& b : reduced) {
            if (!blow && b.blowup) blow = b.blowup;
        }
        const std::string tag = "beta" + short_number(beta);
        for (auto& [k, v] : summary) k = tag + "." + k;
        finish(doc, result, with_suffix(cfg.output_path, "_" + tag), summary, blow.has_value(),
               blow.value_or(std::string()));
    }
    return result;
}

ExperimentResult run_stationary(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto& p = cfg.params;
    const auto& icfg = cfg.integrator;
    const std::size_t n_steps = icfg.steps();
    const auto burn_steps = static_cast<std::size_t>(std::llround(cfg.burn_in / icfg.dt));
    const std::size_t kept = n_steps - std::min(n_steps, burn_steps);
    if (kept < 100) throw ConfigError("stationary run keeps fewer than 100 samples after burn-in");

    const double sd_ref = std::sqrt(1.0 / (p.beta * p.mu));
    const double lo = -5.0 * sd_ref;
    const double width = 10.0 * sd_ref / static_cast<double>(cfg.bins);
    std::vector<double> counts(cfg.bins, 0.0);
    std::size_t outside = 0;

    constexpr std::size_t kBatches = 100;
    const std::size_t batch_len = kept / kBatches;
    std::vector<KahanSum> batch_sums(kBatches);
    KahanSum sx, sxx, sr, srr;

    ExperimentResult result;
    std::optional<std::string> blow;
    try {
        visit_full(p, {0.0, 0.0}, icfg, NoiseStream{cfg.master_seed, 0, 0}, true,
                   [&](std::size_t n, const Vec2& s) {
                       if (n <= burn_steps) return;
                       const std::size_t k = n - burn_steps - 1;
                       const double x = s[0];
                       const double r = s[1] - p.tau * std::sin(p.omega * x);
                       sx += x;
                       sxx += x * x;
                       sr += r;
                       srr += r * r;
                       if (k / batch_len < kBatches) batch_sums[k / batch_len] += x;
                       const double pos = (x - lo) / width;
                       if (pos >= 0.0 && pos < static_cast<double>(cfg.bins)) {
                           counts[static_cast<std::size_t>(pos)] += 1.0;
                       } else {
                           ++outside;
                       }
                   });
    } catch (const TrajectoryBlowup& e) {
        blow = "stationary run blew up at step " + std::to_string(e.step());
    }

    const double n = static_cast<double>(kept);
    const double x_mean = sx.value() / n;
    const double x_var = sxx.value() / n - x_mean * x_mean;
    const double r_mean = sr.value() / n;
    const double r_var = srr.value() / n - r_mean * r_mean;
    std::vector<double> bmeans(kBatches);
    for (std::size_t b = 0; b < kBatches; ++b) {
        bmeans[b] = batch_sums[b].value() / static_cast<double>(batch_len);
    }
    KahanSum bm;
    for (double v : bmeans) bm += v;
    const double bmean = bm.value() / kBatches;
    KahanSum bv;
    for (double v : bmeans) bv += (v - bmean) * (v - bmean);
    const double x_mean_se = std::sqrt(bv.value() / (kBatches - 1) / kBatches);

    CsvDocument doc;
    doc.meta_all(cfg.resolved());
    doc.columns({"x", "count", "density", "reference_density"});
    for (std::size_t b = 0; b < cfg.bins; ++b) {
        const double center = lo + (static_cast<double>(b) + 0.5) * width;
        const double z = center / sd_ref;
        const double row[] = {center, counts[b], counts[b] / (n * width),
                              std::exp(-0.5 * z * z) / (sd_ref * std::sqrt(2.0 * std::numbers::pi))};
        doc.row(row);
    }
    KeyValues summary{
        {"samples", std::to_string(kept)},
        {"outside_histogram", std::to_string(outside)},
        {"x_mean", format_double(x_mean)},
        {"x_mean_stderr", format_double(x_mean_se)},
        {"x_variance", format_double(x_var)},
        {"x_variance_target", format_double(1.0 / (p.beta * p.mu))},
        {"y_residual_variance", format_double(r_var)},
        {"y_residual_variance_target", format_double(1.0 / (p.beta * p.lambda))},
    };
    finish(doc, result, cfg.output_path, summary, blow.has_value(), blow.value_or(std::string()));
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case Experiment::Landscape: return run_landscape(cfg);
        case Experiment::Kernel: return run_kernel(cfg);
        case Experiment::KernelMatrix: return run_kernel_matrix(cfg);
        case Experiment::MeanTrajectory: return run_mean_trajectory(cfg);
        case Experiment::Ensemble: return run_ensemble(cfg);
        case Experiment::Stationary: return run_stationary(cfg);
    }
    throw ConfigError("unknown experiment");
}

}  // namespace mzcg
