#pragma once

#include <array>
#include <optional>
#include <string>

#include "mzcg/noise.hpp"

namespace mzcg {

using Vec2 = std::array<double, 2>;

// Two-dimensional winding-valley benchmark
//   V(x, y) = mu/2 x^2 + lambda/2 (tau sin(omega x) - y)^2
// with reaction coordinate h = x.
struct BenchmarkParams {
    double mu = 2.0;       // stiffness of the resolved mode
    double lambda = 20.0;  // stiffness of the unresolved mode
    double tau = 2.0;      // valley amplitude
    double omega = 10.0;   // valley wavenumber
    double beta = 1.0;     // inverse temperature
    // Zero-temperature limit: conditional draws collapse onto the valley floor.
    bool deterministic = false;

    // Throws ConfigError unless all five scalars are finite and strictly positive.
    void validate() const;

    // Non-fatal note when lambda/mu < 5, i.e. outside the separated-timescale regime.
    std::optional<std::string> advisory() const;
};

double potential(const BenchmarkParams& p, double x, double y);

Vec2 grad_potential(const BenchmarkParams& p, double x, double y);

// Gradient of the effective potential S(h) = mu/2 h^2 (additive constant dropped).
inline double effective_potential_grad(const BenchmarkParams& p, double h) { return p.mu * h; }

// Draw y ~ N(tau sin(omega x), 1/(beta lambda)); consumes one scalar from `stream`.
double conditional_y_sample(const BenchmarkParams& p, double x, NoiseStream& stream);

// Orthogonal part of the drift, QLF = LF - PLF, evaluated at (x, y).
Vec2 orthogonal_drift(const BenchmarkParams& p, double x, double y);

}  // namespace mzcg
