#include "mzcg/benchmark_model.hpp"

#include <cmath>

#include "mzcg/error.hpp"

namespace mzcg {

void BenchmarkParams::validate() const {
    const auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw ConfigError(std::string("parameter ") + name + " must be finite and > 0, got " +
                              std::to_string(v));
        }
    };
    check(mu, "mu");
    check(lambda, "lambda");
    check(tau, "tau");
    check(omega, "omega");
    check(beta, "beta");
}

std::optional<std::string> BenchmarkParams::advisory() const {
    if (lambda / mu < 5.0) {
        return "lambda/mu = " + std::to_string(lambda / mu) +
               " < 5: timescale separation between x and y is weak";
    }
    return std::nullopt;
}

double potential(const BenchmarkParams& p, double x, double y) {
    const double gap = p.tau * std::sin(p.omega * x) - y;
    return 0.5 * p.mu * x * x + 0.5 * p.lambda * gap * gap;
}

Vec2 grad_potential(const BenchmarkParams& p, double x, double y) {
    const double phase = p.omega * x;
    const double gap = p.tau * std::sin(phase) - y;
    return {p.mu * x + p.lambda * p.tau * p.omega * gap * std::cos(phase), -p.lambda * gap};
}

double conditional_y_sample(const BenchmarkParams& p, double x, NoiseStream& stream) {
    const double mean = p.tau * std::sin(p.omega * x);
    const double xi = stream.next_scalar();
    if (p.deterministic) return mean;
    return mean + std::sqrt(1.0 / (p.beta * p.lambda)) * xi;
}

Vec2 orthogonal_drift(const BenchmarkParams& p, double x, double y) {
    const double phase = p.omega * x;
    const double gap = p.tau * std::sin(phase) - y;
    return {-p.lambda * p.tau * p.omega * gap * std::cos(phase), p.lambda * gap};
}

}  // namespace mzcg
