#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mzcg/benchmark_model.hpp"
#include "mzcg/cg_geometry.hpp"
#include "mzcg/numerics.hpp"
#include "mzcg/sde_engine.hpp"

namespace mzcg {

// Monte Carlo estimate of M_s(x0) = beta E[a_s a_0 | x = x0], where a_s is the
// x-component of the orthogonal drift along a characteristic started from
// y0 ~ N(tau sin(omega x0), 1/(beta lambda)).
struct KernelEstimate {
    double x0 = 0.0;
    std::vector<double> lags;
    std::vector<double> values;
    std::vector<double> std_error;
    std::size_t n_samples = 0;
};

// Same sampling, all four blocks of the kernel matrix in the
// (Sigma^-1 Phi, Psi) coordinates.
struct KernelMatrixEstimate {
    double x0 = 0.0;
    std::vector<double> lags;
    std::vector<Eigen::Matrix2d> values;
    std::vector<Eigen::Matrix2d> std_error;
    std::size_t n_samples = 0;
};

// Decay rate lambda (1 + tau^2 omega^2 cos^2(omega h)) of the asymptotic kernel.
double kernel_decay_rate(const BenchmarkParams& p, double h);

// RK4 step size used for characteristics unless overridden: 1e-4 / lambda.
double default_orthogonal_dt(const BenchmarkParams& p);

// `count` lags from 0 to about 5 / kernel_decay_rate(p, x0), uniformly spaced
// and aligned to multiples of dt.
std::vector<double> default_lag_grid(const BenchmarkParams& p, double x0, double dt,
                                     std::size_t count = 60);

// Deterministic characteristic of the orthogonal dynamics,
// d/ds (x, y) = orthogonal_drift(x, y), integrated with classical RK4.
Trajectory orthogonal_trajectory(const BenchmarkParams& p, double x0, double y0,
                                 const IntegratorConfig& cfg);

// Sample i draws its initial y from stream id `stream.stream_id + i`. Lags are
// rounded to the nearest multiple of cfg.dt; they must start at 0, increase
// strictly and not exceed cfg.t_final. n_samples must be >= 2.
KernelEstimate empirical_kernel(const BenchmarkParams& p, double x0,
                                const std::vector<double>& lags, std::size_t n_samples,
                                const NoiseStream& stream, const IntegratorConfig& cfg,
                                unsigned threads = 1);

KernelMatrixEstimate empirical_kernel_matrix(const BenchmarkParams& p, const CGMap& map,
                                             double x0, const std::vector<double>& lags,
                                             std::size_t n_samples, const NoiseStream& stream,
                                             const IntegratorConfig& cfg, unsigned threads = 1);

// OLS fit of log(values) over the leading points above 1e-3 of the peak.
std::optional<LineFit> fit_kernel_decay(const KernelEstimate& est);

double approx_kernel(const BenchmarkParams& p, double s, double h);

// d/dh of approx_kernel.
double approx_kernel_div(const BenchmarkParams& p, double s, double h);

struct MemoryIntegral {
    double drift_term = 0.0;
    double div_term = 0.0;
};

// Frozen-h steepest-descent evaluation of the two memory integrals:
//   drift_term = int_0^inf approx_kernel(s, h) mu h ds
//   div_term   = int_0^inf -(1/beta) approx_kernel_div(s, h) ds
MemoryIntegral memory_integral_closed_form(const BenchmarkParams& p, double h);

}  // namespace mzcg
