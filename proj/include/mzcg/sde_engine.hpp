#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mzcg/benchmark_model.hpp"
#include "mzcg/effective_models.hpp"
#include "mzcg/error.hpp"
#include "mzcg/noise.hpp"

namespace mzcg {

struct IntegratorConfig {
    double dt = 1e-4;
    double t_final = 1.0;
    std::size_t record_stride = 1;

    void validate() const;  // throws ConfigError
    // Number of steps, round(t_final / dt).
    std::size_t steps() const;
};

// Recorded samples of one realization. `states` is row-major with `dim`
// entries per time point.
struct Trajectory {
    std::size_t dim = 1;
    std::vector<double> times;
    std::vector<double> states;

    std::size_t size() const { return times.size(); }
    double at(std::size_t i, std::size_t component = 0) const { return states[i * dim + component]; }
    std::span<const double> state(std::size_t i) const { return {states.data() + i * dim, dim}; }
    std::vector<double> component(std::size_t c) const;
};

// NumericalBlowup raised by the integrators; keeps every sample recorded
// before the failing step.
class TrajectoryBlowup : public NumericalBlowup {
public:
    TrajectoryBlowup(std::size_t step, Trajectory partial);
    const Trajectory& partial() const noexcept { return partial_; }

private:
    Trajectory partial_;
};

// States with a non-finite component or magnitude above this count as blown up.
inline constexpr double kBlowupThreshold = 1e12;

// One Euler-Maruyama step of the full dynamics; `n` selects the noise position
// stream.position + n.
inline void full_em_step(const BenchmarkParams& p, Vec2& s, std::size_t n, double dt,
                         double noise_scale, const NoiseStream& stream, bool thermostat) {
    const Vec2 g = grad_potential(p, s[0], s[1]);
    s[0] -= g[0] * dt;
    s[1] -= g[1] * dt;
    if (thermostat) {
        const auto xi = stream.pair_at(stream.position + n);
        s[0] += noise_scale * xi[0];
        s[1] += noise_scale * xi[1];
    }
}

// Euler-Maruyama for dX = -grad V dt + sqrt(2/beta) dB. The increment of
// step n uses stream.pair_at(stream.position + n). With thermostat off the
// noise term is dropped and the stream is not consulted.
Trajectory simulate_full(const BenchmarkParams& p, Vec2 x0, const IntegratorConfig& cfg,
                         const NoiseStream& stream, bool thermostat);

// Euler-Maruyama for dh = b(h) dt + sigma(h) sqrt(2/beta) dB. Step n uses
// stream.scalar_at(stream.position + n), the x-component of the pair used by
// simulate_full. Throws UnsupportedModel for a thermostatted model without
// a diffusion coefficient.
Trajectory simulate_scalar(const EffectiveModel& model, double h0, const IntegratorConfig& cfg,
                           const NoiseStream& stream, bool thermostat);

// Same stepping as simulate_full without recording: visit(n, state) is called
// after every step n = 1..cfg.steps(). Throws TrajectoryBlowup with an empty
// partial trajectory on blowup.
template <class Visitor>
void visit_full(const BenchmarkParams& p, Vec2 x0, const IntegratorConfig& cfg,
                const NoiseStream& stream, bool thermostat, Visitor&& visit) {
    cfg.validate();
    const std::size_t n_steps = cfg.steps();
    const double noise_scale = std::sqrt(2.0 * cfg.dt / p.beta);
    Vec2 s = x0;
    for (std::size_t n = 0; n < n_steps; ++n) {
        full_em_step(p, s, n, cfg.dt, noise_scale, stream, thermostat);
        if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || std::abs(s[0]) > kBlowupThreshold ||
            std::abs(s[1]) > kBlowupThreshold) {
            throw TrajectoryBlowup(n + 1, Trajectory{2, {}, {}});
        }
        visit(n + 1, s);
    }
}

struct EnsembleStats {
    Trajectory mean;
    std::vector<double> std_error;  // same layout as mean.states
    std::size_t count = 0;
};

// Pointwise mean and standard error (sample std / sqrt(n)). Throws
// GridMismatch unless every trajectory shares the first one's grid and dimension.
EnsembleStats ensemble_mean(std::span<const Trajectory> trajectories);

}  // namespace mzcg
