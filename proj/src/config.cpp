#include "mzcg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mzcg/error.hpp"

namespace mzcg {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError("invalid number for " + std::string(key) + ": '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t parse_uint(std::string_view key, std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("invalid non-negative integer for " + std::string(key) + ": '" +
                          std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw ConfigError("invalid boolean for " + std::string(key) + ": '" + std::string(text) + "'");
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string_view experiment_name(Experiment e) {
    switch (e) {
        case Experiment::Landscape: return "landscape";
        case Experiment::Kernel: return "kernel";
        case Experiment::KernelMatrix: return "kernel-matrix";
        case Experiment::MeanTrajectory: return "mean-trajectory";
        case Experiment::Ensemble: return "ensemble";
        case Experiment::Stationary: return "stationary";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    for (auto e : {Experiment::Landscape, Experiment::Kernel, Experiment::KernelMatrix,
                   Experiment::MeanTrajectory, Experiment::Ensemble, Experiment::Stationary}) {
        if (experiment_name(e) == name) return e;
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig ExperimentConfig::defaults(Experiment e, bool desk_scale) {
    ExperimentConfig c;
    c.experiment = e;
    c.desk_scale = desk_scale;
    c.output_path = std::string(experiment_name(e)) + ".csv";
    switch (e) {
        case Experiment::Landscape:
            break;
        case Experiment::Kernel:
        case Experiment::KernelMatrix:
            c.n_samples = 2000;
            c.x0 = 0.0;
            break;
        case Experiment::MeanTrajectory:
            c.x0 = 2.0;
            c.models = {ModelKind::MemoryCorrected, ModelKind::MemoryFree, ModelKind::NaiveMemory};
            c.integrator = desk_scale ? IntegratorConfig{1e-4, 80.0, 100}
                                      : IntegratorConfig{1e-5, 80.0, 1000};
            c.n_samples = desk_scale ? 200 : 500;
            break;
        case Experiment::Ensemble:
            c.x0 = std::numbers::pi / (2.0 * c.params.omega);
            c.models = {ModelKind::MemoryCorrected, ModelKind::MemoryFree};
            c.beta_list = {1.0, 10.0, 100.0};
            c.integrator = desk_scale ? IntegratorConfig{1e-4, 32.0, 100}
                                      : IntegratorConfig{1e-5, 320.0, 1000};
            c.n_samples = desk_scale ? 200 : 500;
            break;
        case Experiment::Stationary:
            // The shallow valley decorrelates in O(1) time; tau=2, omega=10 needs T ~ 1e4.
            c.params.tau = 0.2;
            c.params.omega = 4.0;
            c.integrator = IntegratorConfig{1e-4, 2000.0, 1};
            break;
    }
    return c;
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
    if (key == "mu") params.mu = parse_double(key, value);
    else if (key == "lambda") params.lambda = parse_double(key, value);
    else if (key == "tau") params.tau = parse_double(key, value);
    else if (key == "omega") params.omega = parse_double(key, value);
    else if (key == "beta") params.beta = parse_double(key, value);
    else if (key == "deterministic") params.deterministic = parse_bool(key, value);
    else if (key == "dt") integrator.dt = parse_double(key, value);
    else if (key == "t_final" || key == "T") integrator.t_final = parse_double(key, value);
    else if (key == "record_stride") integrator.record_stride = parse_uint(key, value);
    else if (key == "n_samples") n_samples = parse_uint(key, value);
    else if (key == "seed") master_seed = parse_uint(key, value);
    else if (key == "x0") x0 = parse_double(key, value);
    else if (key == "out") output_path = std::string(trim(value));
    else if (key == "threads") threads = static_cast<unsigned>(parse_uint(key, value));
    else if (key == "n_lags") n_lags = parse_uint(key, value);
    else if (key == "kernel_dt") kernel_dt = parse_double(key, value);
    else if (key == "grid_min") grid_min = parse_double(key, value);
    else if (key == "grid_max") grid_max = parse_double(key, value);
    else if (key == "grid_points") grid_points = parse_uint(key, value);
    else if (key == "bins") bins = parse_uint(key, value);
    else if (key == "burn_in") burn_in = parse_double(key, value);
    else if (key == "models") {
        models.clear();
        for (auto item : split_list(value)) models.push_back(parse_model_kind(item));
    } else if (key == "beta_list") {
        beta_list.clear();
        for (auto item : split_list(value)) beta_list.push_back(parse_double(key, item));
    } else {
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
}

KeyValues ExperimentConfig::resolved() const {
    std::string model_list, beta_text;
    for (auto m : models) {
        if (!model_list.empty()) model_list += ',';
        model_list += model_name(m);
    }
    for (double b : beta_list) {
        if (!beta_text.empty()) beta_text += ',';
        beta_text += format_double(b);
    }
    return {
        {"experiment", std::string(experiment_name(experiment))},
        {"desk_scale", desk_scale ? "1" : "0"},
        {"mu", format_double(params.mu)},
        {"lambda", format_double(params.lambda)},
        {"tau", format_double(params.tau)},
        {"omega", format_double(params.omega)},
        {"beta", format_double(params.beta)},
        {"deterministic", params.deterministic ? "1" : "0"},
        {"dt", format_double(integrator.dt)},
        {"t_final", format_double(integrator.t_final)},
        {"record_stride", std::to_string(integrator.record_stride)},
        {"n_samples", std::to_string(n_samples)},
        {"seed", std::to_string(master_seed)},
        {"x0", format_double(x0)},
        {"models", model_list},
        {"beta_list", beta_text},
        {"n_lags", std::to_string(n_lags)},
        {"kernel_dt", format_double(kernel_dt)},
        {"grid_min", format_double(grid_min)},
        {"grid_max", format_double(grid_max)},
        {"grid_points", std::to_string(grid_points)},
        {"bins", std::to_string(bins)},
        {"burn_in", format_double(burn_in)},
    };
}

void ExperimentConfig::validate() const {
    params.validate();
    if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    switch (experiment) {
        case Experiment::Landscape:
            if (!(grid_max > grid_min)) throw ConfigError("grid_max must exceed grid_min");
            if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
            break;
        case Experiment::Kernel:
        case Experiment::KernelMatrix:
            if (n_samples < 2) throw ConfigError("kernel estimation needs n_samples >= 2");
            if (n_lags < 2) throw ConfigError("n_lags must be >= 2");
            if (kernel_dt < 0.0) throw ConfigError("kernel_dt must be >= 0");
            break;
        case Experiment::MeanTrajectory:
            integrator.validate();
            if (models.empty()) throw ConfigError("mean-trajectory needs at least one model");
            break;
        case Experiment::Ensemble:
            integrator.validate();
            if (beta_list.empty()) throw ConfigError("ensemble needs a non-empty beta_list");
            for (double b : beta_list) {
                if (!(b > 0.0)) throw ConfigError("beta_list entries must be > 0");
            }
            for (auto m : models) {
                if (!has_diffusion(m)) {
                    throw ConfigError(std::string(model_name(m)) +
                                      " has no noise closure and cannot run in the ensemble experiment");
                }
            }
            break;
        case Experiment::Stationary:
            integrator.validate();
            if (bins < 1) throw ConfigError("bins must be >= 1");
            if (burn_in < 0.0 || burn_in >= integrator.t_final) {
                throw ConfigError("burn_in must lie in [0, t_final)");
            }
            break;
    }
}

KeyValues parse_key_values(std::string_view text) {
    KeyValues out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

std::pair<std::string, std::string> parse_assignment(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || trim(text.substr(0, eq)).empty()) {
        throw ConfigError("expected key=value, got '" + std::string(text) + "'");
    }
    return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

ExperimentConfig resolve_config(Experiment e, bool desk_scale, const KeyValues& file_values,
                                const KeyValues& overrides) {
    auto cfg = ExperimentConfig::defaults(e, desk_scale);
    for (const auto& [k, v] : file_values) cfg.set(k, v);
    for (const auto& [k, v] : overrides) cfg.set(k, v);
    // The thermostatted ensembles always start on the first zero of cos(omega x).
    if (e == Experiment::Ensemble) cfg.x0 = std::numbers::pi / (2.0 * cfg.params.omega);
    cfg.validate();
    return cfg;
}

}  // namespace mzcg
