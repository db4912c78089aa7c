#include "mzcg/memory_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mzcg/error.hpp"
#include "mzcg/parallel.hpp"

namespace mzcg {

namespace {

void rk4_step(const BenchmarkParams& p, Vec2& s, double dt) {
    const Vec2 k1 = orthogonal_drift(p, s[0], s[1]);
    const Vec2 k2 = orthogonal_drift(p, s[0] + 0.5 * dt * k1[0], s[1] + 0.5 * dt * k1[1]);
    const Vec2 k3 = orthogonal_drift(p, s[0] + 0.5 * dt * k2[0], s[1] + 0.5 * dt * k2[1]);
    const Vec2 k4 = orthogonal_drift(p, s[0] + dt * k3[0], s[1] + dt * k3[1]);
    s[0] += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    s[1] += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
}

bool bad_state(const Vec2& s) {
    return !std::isfinite(s[0]) || !std::isfinite(s[1]) || std::abs(s[0]) > kBlowupThreshold ||
           std::abs(s[1]) > kBlowupThreshold;
}

std::vector<std::size_t> lag_steps(const std::vector<double>& lags, const IntegratorConfig& cfg) {
    cfg.validate();
    if (lags.empty() || lags.front() != 0.0) throw ConfigError("lag grid must start at 0");
    std::vector<std::size_t> steps;
    steps.reserve(lags.size());
    for (double s : lags) {
        if (!std::isfinite(s) || s < 0.0) throw ConfigError("lags must be finite and >= 0");
        if (s > cfg.t_final * (1.0 + 1e-12)) {
            throw ConfigError("lag " + std::to_string(s) + " exceeds horizon " +
                              std::to_string(cfg.t_final));
        }
        const auto k = static_cast<std::size_t>(std::llround(s / cfg.dt));
        if (!steps.empty() && k <= steps.back()) {
            throw ConfigError("lags must be strictly increasing after rounding to multiples of dt");
        }
        steps.push_back(k);
    }
    return steps;
}

// Orthogonal drift vectors at each lag step for every sample, laid out as
// drifts[(i * L + j)] for sample i and lag j.
std::vector<Vec2> sample_drifts(const BenchmarkParams& p, double x0,
                                const std::vector<std::size_t>& steps, std::size_t n_samples,
                                const NoiseStream& stream, double dt, unsigned threads) {
    const std::size_t n_lags = steps.size();
    std::vector<Vec2> drifts(n_samples * n_lags);
    parallel_for(n_samples, threads, [&](std::size_t i) {
        NoiseStream s{stream.master_seed, stream.stream_id + i, stream.position};
        Vec2 state{x0, conditional_y_sample(p, x0, s)};
        std::size_t n = 0;
        for (std::size_t j = 0; j < n_lags; ++j) {
            for (; n < steps[j]; ++n) {
                rk4_step(p, state, dt);
                if (bad_state(state)) {
                    throw NumericalBlowup(n + 1, i,
                                          "orthogonal characteristic of sample " +
                                              std::to_string(i) + " blew up at step " +
                                              std::to_string(n + 1));
                }
            }
            drifts[i * n_lags + j] = orthogonal_drift(p, state[0], state[1]);
        }
    });
    return drifts;
}

std::vector<double> realized_lags(const std::vector<std::size_t>& steps, double dt) {
    std::vector<double> out(steps.size());
    std::transform(steps.begin(), steps.end(), out.begin(),
                   [dt](std::size_t k) { return static_cast<double>(k) * dt; });
    return out;
}

double cos_sq_factor(const BenchmarkParams& p, double h) {
    const double c = std::cos(p.omega * h);
    return p.tau * p.tau * p.omega * p.omega * c * c;
}

}  // namespace

double kernel_decay_rate(const BenchmarkParams& p, double h) {
    return p.lambda * (1.0 + cos_sq_factor(p, h));
}

double default_orthogonal_dt(const BenchmarkParams& p) { return 1e-4 / p.lambda; }

std::vector<double> default_lag_grid(const BenchmarkParams& p, double x0, double dt,
                                     std::size_t count) {
    if (count < 2) throw ConfigError("lag grid needs at least two points");
    const double span = 5.0 / kernel_decay_rate(p, x0);
    const double spacing_steps =
        std::max(1.0, std::round(span / static_cast<double>(count - 1) / dt));
    std::vector<double> lags(count);
    for (std::size_t j = 0; j < count; ++j) {
        lags[j] = static_cast<double>(j) * spacing_steps * dt;
    }
    return lags;
}

Trajectory orthogonal_trajectory(const BenchmarkParams& p, double x0, double y0,
                                 const IntegratorConfig& cfg) {
    cfg.validate();
    const std::size_t n_steps = cfg.steps();
    Trajectory traj;
    traj.dim = 2;
    Vec2 state{x0, y0};
    auto record = [&](std::size_t n) {
        traj.times.push_back(static_cast<double>(n) * cfg.dt);
        traj.states.push_back(state[0]);
        traj.states.push_back(state[1]);
    };
    if (bad_state(state)) throw TrajectoryBlowup(0, std::move(traj));
    record(0);
    for (std::size_t n = 0; n < n_steps; ++n) {
        rk4_step(p, state, cfg.dt);
        if (bad_state(state)) throw TrajectoryBlowup(n + 1, std::move(traj));
        if ((n + 1) % cfg.record_stride == 0 || n + 1 == n_steps) record(n + 1);
    }
    return traj;
}

KernelEstimate empirical_kernel(const BenchmarkParams& p, double x0,
                                const std::vector<double>& lags, std::size_t n_samples,
                                const NoiseStream& stream, const IntegratorConfig& cfg,
                                unsigned threads) {
    if (n_samples < 2) throw ConfigError("empirical_kernel needs n_samples >= 2");
    const auto steps = lag_steps(lags, cfg);
    const auto drifts = sample_drifts(p, x0, steps, n_samples, stream, cfg.dt, threads);
    const std::size_t n_lags = steps.size();
    const double n = static_cast<double>(n_samples);

    KernelEstimate est;
    est.x0 = x0;
    est.lags = realized_lags(steps, cfg.dt);
    est.values.resize(n_lags);
    est.std_error.resize(n_lags);
    est.n_samples = n_samples;
    for (std::size_t j = 0; j < n_lags; ++j) {
        KahanSum sum;
        for (std::size_t i = 0; i < n_samples; ++i) {
            sum += drifts[i * n_lags + j][0] * drifts[i * n_lags][0];
        }
        const double mean = sum.value() / n;
        KahanSum sq;
        for (std::size_t i = 0; i < n_samples; ++i) {
            const double d = drifts[i * n_lags + j][0] * drifts[i * n_lags][0] - mean;
            sq += d * d;
        }
        est.values[j] = p.beta * mean;
        est.std_error[j] = p.beta * std::sqrt(sq.value() / (n - 1.0) / n);
    }
    return est;
}

KernelMatrixEstimate empirical_kernel_matrix(const BenchmarkParams& p, const CGMap& map,
                                             double x0, const std::vector<double>& lags,
                                             std::size_t n_samples, const NoiseStream& stream,
                                             const IntegratorConfig& cfg, unsigned threads) {
    if (map.full_dim() != 2 || map.resolved_dim() != 1) {
        throw DimensionMismatch("kernel matrix needs a 1x2 selector for the planar benchmark");
    }
    if (n_samples < 2) throw ConfigError("empirical_kernel_matrix needs n_samples >= 2");
    const auto steps = lag_steps(lags, cfg);
    const auto drifts = sample_drifts(p, x0, steps, n_samples, stream, cfg.dt, threads);
    const std::size_t n_lags = steps.size();
    const double n = static_cast<double>(n_samples);

    // Rows: Sigma^-1 Phi (resolved) then Psi (unresolved).
    Eigen::Matrix2d basis;
    basis.row(0) = map.sigma_inv * map.phi;
    basis.row(1) = map.psi;
    auto coords = [&](std::size_t i, std::size_t j) {
        const Vec2& d = drifts[i * n_lags + j];
        return Eigen::Vector2d(basis(0, 0) * d[0] + basis(0, 1) * d[1],
                               basis(1, 0) * d[0] + basis(1, 1) * d[1]);
    };

    KernelMatrixEstimate est;
    est.x0 = x0;
    est.lags = realized_lags(steps, cfg.dt);
    est.values.resize(n_lags);
    est.std_error.resize(n_lags);
    est.n_samples = n_samples;
    for (std::size_t j = 0; j < n_lags; ++j) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                KahanSum sum;
                for (std::size_t i = 0; i < n_samples; ++i) sum += coords(i, j)(a) * coords(i, 0)(b);
                const double mean = sum.value() / n;
                KahanSum sq;
                for (std::size_t i = 0; i < n_samples; ++i) {
                    const double d = coords(i, j)(a) * coords(i, 0)(b) - mean;
                    sq += d * d;
                }
                est.values[j](a, b) = p.beta * mean;
                est.std_error[j](a, b) = p.beta * std::sqrt(sq.value() / (n - 1.0) / n);
            }
        }
    }
    return est;
}

std::optional<LineFit> fit_kernel_decay(const KernelEstimate& est) {
    return fit_log_decay(est.lags, est.values, 1e-3);
}

double approx_kernel(const BenchmarkParams& p, double s, double h) {
    const double a = cos_sq_factor(p, h);
    return p.lambda * a * std::exp(-p.lambda * (1.0 + a) * s);
}

double approx_kernel_div(const BenchmarkParams& p, double s, double h) {
    const double a = cos_sq_factor(p, h);
    const double t2w3 = p.tau * p.tau * p.omega * p.omega * p.omega;
    return -p.lambda * t2w3 * std::sin(2.0 * p.omega * h) * (1.0 - p.lambda * a * s) *
           std::exp(-p.lambda * (1.0 + a) * s);
}

MemoryIntegral memory_integral_closed_form(const BenchmarkParams& p, double h) {
    const double a = cos_sq_factor(p, h);
    const double t2w3 = p.tau * p.tau * p.omega * p.omega * p.omega;
    return {a / (1.0 + a) * p.mu * h,
            (1.0 / p.beta) * t2w3 * std::sin(2.0 * p.omega * h) / ((1.0 + a) * (1.0 + a))};
}

}  // namespace mzcg
