#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the code paths being checked.

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

template <class F>
double central_difference(F&& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <class F>
double integrate(F&& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-11);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Random m x N selector with m <= N <= max_n, entries uniform on [-1, 1].
inline Eigen::MatrixXd random_selector(std::mt19937_64& rng, int max_n = 8) {
    std::uniform_int_distribution<int> n_dist(1, max_n);
    const int n = n_dist(rng);
    std::uniform_int_distribution<int> m_dist(1, n);
    const int m = m_dist(rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd phi(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) phi(i, j) = u(rng);
    return phi;
}

// Exact Ornstein-Uhlenbeck moments for dx = -k x dt + sqrt(2/beta) dB.
inline double ou_mean(double x0, double k, double t) { return x0 * std::exp(-k * t); }
inline double ou_variance(double k, double beta, double t) {
    return (1.0 - std::exp(-2.0 * k * t)) / (beta * k);
}

// Linearized orthogonal-dynamics velocity for the benchmark: the x-velocity of
// the characteristic from (x0, tau sin(omega x0) + v0).
inline double linearized_velocity(double lambda, double tau, double omega, double x0, double v0,
                                  double s) {
    const double c = std::cos(omega * x0);
    const double rate = lambda * (1.0 + tau * tau * omega * omega * c * c);
    return lambda * tau * omega * v0 * c * std::exp(-rate * s);
}

}  // namespace oracle
