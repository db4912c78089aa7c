#include "mzcg/numerics.hpp"

#include <vector>

#include "mzcg/error.hpp"

namespace mzcg {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DimensionMismatch("fit_line needs two equally sized series of length >= 2");
    }
    const double n = static_cast<double>(x.size());
    KahanSum sx, sy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    KahanSum sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    fit.points = x.size();
    return fit;
}

std::optional<LineFit> fit_log_decay(std::span<const double> lags, std::span<const double> values,
                                     double rel_floor) {
    if (lags.size() != values.size() || values.empty() || !(values[0] > 0.0)) return std::nullopt;
    const double floor = rel_floor * values[0];
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size() && values[i] > floor; ++i) {
        xs.push_back(lags[i]);
        ys.push_back(std::log(values[i]));
    }
    if (xs.size() < 2) return std::nullopt;
    return fit_line(xs, ys);
}

std::optional<double> time_to_half(std::span<const double> times, std::span<const double> series) {
    if (times.size() != series.size() || series.empty()) return std::nullopt;
    const double target = 0.5 * std::abs(series[0]);
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double prev = std::abs(series[i - 1]);
        const double cur = std::abs(series[i]);
        if (!std::isfinite(cur)) return std::nullopt;
        if (cur <= target) {
            if (prev == cur) return times[i];
            const double frac = (prev - target) / (prev - cur);
            return times[i - 1] + frac * (times[i] - times[i - 1]);
        }
    }
    return std::nullopt;
}

}  // namespace mzcg
