#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

namespace mzcg {

// Neumaier-compensated running sum.
class KahanSum {
public:
    KahanSum& operator+=(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares y = slope * x + intercept. Needs at least two points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Decay rate from an OLS fit of log(values) against lags. Uses the leading
// run of points whose value exceeds `rel_floor` times values[0]; returns the
// fitted slope (negative for decay), or nullopt when fewer than two points qualify.
std::optional<LineFit> fit_log_decay(std::span<const double> lags, std::span<const double> values,
                                     double rel_floor = 1e-3);

// First time at which |series| drops to half of |series[0]|, linearly
// interpolated between samples; nullopt if it never does.
std::optional<double> time_to_half(std::span<const double> times, std::span<const double> series);

}  // namespace mzcg
