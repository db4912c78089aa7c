#include "mzcg/sde_engine.hpp"

#include <cmath>
#include <string>

#include "mzcg/numerics.hpp"

namespace mzcg {

void IntegratorConfig::validate() const {
    if (!std::isfinite(dt) || !(dt > 0.0)) throw ConfigError("dt must be > 0");
    if (!std::isfinite(t_final) || t_final < dt) throw ConfigError("t_final must be >= dt");
    if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
}

std::size_t IntegratorConfig::steps() const {
    return static_cast<std::size_t>(std::llround(t_final / dt));
}

std::vector<double> Trajectory::component(std::size_t c) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = at(i, c);
    return out;
}

TrajectoryBlowup::TrajectoryBlowup(std::size_t step, Trajectory partial)
    : NumericalBlowup(step, 0,
                      "state left the finite range at step " + std::to_string(step) +
                          (partial.times.empty()
                               ? std::string()
                               : " (last recorded t=" + std::to_string(partial.times.back()) + ")")),
      partial_(std::move(partial)) {}

namespace {

template <std::size_t Dim>
bool blown_up(const std::array<double, Dim>& s) {
    for (double v : s) {
        if (!std::isfinite(v) || std::abs(v) > kBlowupThreshold) return true;
    }
    return false;
}

// Drives `step(state, n)` for cfg.steps() iterations, recording on the stride
// grid and at the final step.
template <std::size_t Dim, class Step>
Trajectory integrate(std::array<double, Dim> state, const IntegratorConfig& cfg, Step&& step) {
    cfg.validate();
    const std::size_t n_steps = cfg.steps();
    Trajectory traj;
    traj.dim = Dim;
    const std::size_t n_records = n_steps / cfg.record_stride + 2;
    traj.times.reserve(n_records);
    traj.states.reserve(n_records * Dim);
    auto record = [&](std::size_t n) {
        traj.times.push_back(static_cast<double>(n) * cfg.dt);
        traj.states.insert(traj.states.end(), state.begin(), state.end());
    };
    if (blown_up(state)) throw TrajectoryBlowup(0, std::move(traj));
    record(0);
    for (std::size_t n = 0; n < n_steps; ++n) {
        step(state, n);
        if (blown_up(state)) throw TrajectoryBlowup(n + 1, std::move(traj));
        if ((n + 1) % cfg.record_stride == 0 || n + 1 == n_steps) record(n + 1);
    }
    return traj;
}

}  // namespace

Trajectory simulate_full(const BenchmarkParams& p, Vec2 x0, const IntegratorConfig& cfg,
                         const NoiseStream& stream, bool thermostat) {
    const double dt = cfg.dt;
    const double noise_scale = std::sqrt(2.0 * dt / p.beta);
    return integrate<2>(x0, cfg, [&](Vec2& s, std::size_t n) {
        full_em_step(p, s, n, dt, noise_scale, stream, thermostat);
    });
}

Trajectory simulate_scalar(const EffectiveModel& model, double h0, const IntegratorConfig& cfg,
                           const NoiseStream& stream, bool thermostat) {
    if (thermostat && !has_diffusion(model.kind)) {
        throw UnsupportedModel(std::string(model_name(model.kind)) +
                               " cannot be integrated with a thermostat");
    }
    const double dt = cfg.dt;
    const double noise_scale = std::sqrt(2.0 * dt / model.params.beta);
    return integrate<1>({h0}, cfg, [&](std::array<double, 1>& s, std::size_t n) {
        const double h = s[0];
        double next = h + drift(model, h) * dt;
        if (thermostat) {
            next += diffusion(model, h) * noise_scale * stream.scalar_at(stream.position + n);
        }
        s[0] = next;
    });
}

EnsembleStats ensemble_mean(std::span<const Trajectory> trajectories) {
    if (trajectories.empty()) throw GridMismatch("ensemble_mean: no trajectories");
    const Trajectory& first = trajectories.front();
    for (const auto& t : trajectories) {
        if (t.dim != first.dim || t.times != first.times || t.states.size() != first.states.size()) {
            throw GridMismatch("ensemble_mean: trajectories do not share a time grid");
        }
    }
    const std::size_t n = trajectories.size();
    const std::size_t width = first.states.size();

    EnsembleStats out;
    out.count = n;
    out.mean.dim = first.dim;
    out.mean.times = first.times;
    out.mean.states.assign(width, 0.0);
    out.std_error.assign(width, 0.0);

    for (std::size_t k = 0; k < width; ++k) {
        KahanSum sum;
        for (const auto& t : trajectories) sum += t.states[k];
        const double mean = sum.value() / static_cast<double>(n);
        out.mean.states[k] = mean;
        if (n > 1) {
            KahanSum sq;
            for (const auto& t : trajectories) {
                const double d = t.states[k] - mean;
                sq += d * d;
            }
            const double var = sq.value() / static_cast<double>(n - 1);
            out.std_error[k] = std::sqrt(var / static_cast<double>(n));
        }
    }
    return out;
}

}  // namespace mzcg
