#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mzcg/error.hpp"
#include "mzcg/memory_kernel.hpp"
#include "oracles.hpp"

using namespace mzcg;

namespace {
const BenchmarkParams kSteep{2.0, 20.0, 2.0, 10.0, 1.0};
const BenchmarkParams kShallow{2.0, 20.0, 0.2, 4.0, 1.0};
constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20190417;

KernelEstimate estimate(const BenchmarkParams& p, double x0, double dt, std::size_t n = 2000,
                        unsigned threads = 1) {
    const auto lags = default_lag_grid(p, x0, dt);
    return empirical_kernel(p, x0, lags, n, NoiseStream{kSeed, 0, 0},
                            IntegratorConfig{dt, lags.back(), 1}, threads);
}

double endpoint_x(double dt) {
    const double x0 = 0.3;
    const double y0 = kSteep.tau * std::sin(kSteep.omega * x0) + 0.3;
    const auto t = orthogonal_trajectory(kSteep, x0, y0, IntegratorConfig{dt, 1e-3, 1000000});
    return t.at(t.size() - 1, 0);
}
}  // namespace

TEST_CASE("characteristics from the valley floor stay put") {
    const double x0 = 0.41;
    const double y0 = kSteep.tau * std::sin(kSteep.omega * x0);
    const auto t = orthogonal_trajectory(kSteep, x0, y0, IntegratorConfig{1e-5, 1e-3, 10});
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(t.at(i, 0) == x0);
        CHECK(t.at(i, 1) == y0);
    }
}

TEST_CASE("linear regime follows the linearized velocity") {
    for (double x0 : {0.0, kPi / kSteep.omega}) {
        const double v0 = 1e-4;
        const double y0 = kSteep.tau * std::sin(kSteep.omega * x0) + v0;
        const double rate = kernel_decay_rate(kSteep, x0);
        const double dt = default_orthogonal_dt(kSteep);
        const auto t = orthogonal_trajectory(kSteep, x0, y0, IntegratorConfig{dt, 3.0 / rate, 1});
        double worst = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double vel = orthogonal_drift(kSteep, t.at(i, 0), t.at(i, 1))[0];
            const double want = oracle::linearized_velocity(kSteep.lambda, kSteep.tau, kSteep.omega,
                                                            x0, v0, t.times[i]);
            worst = std::max(worst, oracle::rel_err(vel, want));
        }
        CHECK(worst < 0.01);
    }
}

TEST_CASE("RK4 characteristics converge at fourth order") {
    const double ref = endpoint_x(1e-4 / 8.0);
    const double e1 = std::abs(endpoint_x(1e-4) - ref);
    const double e2 = std::abs(endpoint_x(5e-5) - ref);
    const double ratio = e1 / e2;
    CHECK(ratio > 10.0);
    CHECK(ratio < 24.0);
}

TEST_CASE("kernel amplitude at zero lag") {
    const auto est = estimate(kSteep, 0.0, default_orthogonal_dt(kSteep));
    CHECK(est.lags.front() == 0.0);
    CHECK(est.n_samples == 2000);
    CHECK(std::abs(est.values[0] - 8000.0) < 3.0 * est.std_error[0]);
    CHECK(est.values[0] > 0.0);
}

TEST_CASE("kernel vanishes where cos(omega x0) = 0") {
    const double x0 = kPi / (2.0 * kSteep.omega);
    const auto est = estimate(kSteep, x0, 1e-5, 500);
    for (std::size_t j = 0; j < est.values.size(); ++j) {
        CHECK(std::abs(est.values[j]) <= 3.0 * est.std_error[j] + 1e-20);
        CHECK(std::abs(est.values[j]) < 1e-20);
    }
}

TEST_CASE("kernel decays monotonically at the asymptotic rate") {
    for (const auto& [p, dt] : {std::pair{kSteep, default_orthogonal_dt(kSteep)},
                                std::pair{kShallow, 1e-4}}) {
        const double x0 = kPi / p.omega;  // |cos| = 1
        const auto est = estimate(p, x0, dt);
        const auto fit = fit_kernel_decay(est);
        REQUIRE(fit.has_value());
        const double rate = kernel_decay_rate(p, x0);
        CHECK(std::abs(-fit->slope / rate - 1.0) < 0.10);
        for (std::size_t j = 0; j < est.values.size(); ++j) {
            CHECK(est.values[0] >= est.values[j] - 3.0 * est.std_error[j]);
            if (est.lags[j] <= 2.0 / rate) {
                const double a = approx_kernel(p, est.lags[j], x0);
                CHECK(std::abs(est.values[j] - a) <=
                      std::max(0.10 * std::abs(a), 3.0 * est.std_error[j]));
            }
        }
    }
}

TEST_CASE("estimates do not depend on the worker count") {
    const auto a = estimate(kSteep, 0.05, default_orthogonal_dt(kSteep), 64, 1);
    const auto b = estimate(kSteep, 0.05, default_orthogonal_dt(kSteep), 64, 3);
    CHECK(a.values == b.values);
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("lag grid validation") {
    const IntegratorConfig cfg{1e-5, 1e-3, 1};
    const NoiseStream s{1, 0, 0};
    CHECK_THROWS_AS(empirical_kernel(kSteep, 0.0, {1e-5, 2e-5}, 10, s, cfg), ConfigError);
    CHECK_THROWS_AS(empirical_kernel(kSteep, 0.0, {0.0, 2e-5, 1e-5}, 10, s, cfg), ConfigError);
    CHECK_THROWS_AS(empirical_kernel(kSteep, 0.0, {0.0, 2e-3}, 10, s, cfg), ConfigError);
    CHECK_THROWS_AS(empirical_kernel(kSteep, 0.0, {0.0, 1e-4}, 1, s, cfg), ConfigError);
    const auto lags = default_lag_grid(kSteep, 0.0, 5e-6);
    CHECK(lags.size() == 60);
    CHECK(lags.front() == 0.0);
    CHECK(lags.back() == doctest::Approx(5.0 / 8020.0).epsilon(0.02));
}

TEST_CASE("blowups report the sample index") {
    // A step far beyond the RK4 stability limit.
    try {
        empirical_kernel(kSteep, 0.0, {0.0, 10.0}, 4, NoiseStream{1, 0, 0},
                         IntegratorConfig{1.0, 10.0, 1});
        FAIL("expected blowup");
    } catch (const NumericalBlowup& e) {
        CHECK(e.sample() == 0);
        CHECK(e.step() > 0);
    }
}

TEST_CASE("kernel matrix blocks") {
    Eigen::MatrixXd phi(1, 2);
    phi << 1.0, 0.0;
    const auto map = build_cg_map(phi);
    const double dt = default_orthogonal_dt(kSteep);

    SUBCASE("|cos| = 1") {
        const double x0 = 0.0;
        const auto lags = default_lag_grid(kSteep, x0, dt);
        const IntegratorConfig cfg{dt, lags.back(), 1};
        const auto scalar = empirical_kernel(kSteep, x0, lags, 2000, NoiseStream{kSeed, 0, 0}, cfg);
        const auto matrix =
            empirical_kernel_matrix(kSteep, map, x0, lags, 2000, NoiseStream{kSeed, 0, 0}, cfg);
        for (std::size_t j = 0; j < lags.size(); ++j) {
            CHECK(matrix.values[j](0, 0) == scalar.values[j]);
        }
        const double rate = kernel_decay_rate(kSteep, x0);
        CHECK(matrix.lags.back() <= 10.0 / rate);
        const double drop = std::log(std::abs(matrix.values.front()(0, 1))) -
                            std::log(std::abs(matrix.values.back()(0, 1)));
        CHECK(drop >= 4.0);
    }
    SUBCASE("cos = 0") {
        const double x0 = kPi / (2.0 * kSteep.omega);
        const auto lags = default_lag_grid(kSteep, x0, 1e-5);
        const auto matrix = empirical_kernel_matrix(kSteep, map, x0, lags, 500,
                                                    NoiseStream{kSeed, 0, 0},
                                                    IntegratorConfig{1e-5, lags.back(), 1});
        CHECK(std::abs(matrix.values[0](0, 1)) <= 3.0 * matrix.std_error[0](0, 1) + 1e-12);
        // The unresolved block at zero lag is beta lambda^2 E[v0^2] = lambda.
        CHECK(std::abs(matrix.values[0](1, 1) - kSteep.lambda) <= 3.0 * matrix.std_error[0](1, 1));
    }
    CHECK_THROWS_AS(empirical_kernel_matrix(kSteep, build_cg_map(Eigen::MatrixXd::Identity(2, 2)),
                                            0.0, {0.0, dt}, 4, NoiseStream{}, {dt, dt, 1}),
                    DimensionMismatch);
}

TEST_CASE("asymptotic kernel values") {
    CHECK(approx_kernel(kSteep, 0.0, 0.0) == doctest::Approx(8000.0));
    for (double s : {0.0, 1e-4, 1.0}) {
        CHECK(std::abs(approx_kernel(kSteep, s, kPi / (2.0 * kSteep.omega))) < 1e-25);
    }
    double prev = approx_kernel(kSteep, 0.0, 0.1);
    for (int i = 1; i < 100; ++i) {
        const double cur = approx_kernel(kSteep, 1e-4 * i, 0.1);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(approx_kernel(kSteep, 1.0, 0.1) < 1e-100);
    CHECK(kernel_decay_rate(kSteep, 0.0) == doctest::Approx(8020.0));
}

TEST_CASE("kernel divergence is the h-derivative of the kernel") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uh(-1.0, 1.0), us(0.0, 2e-3);
    for (const auto& p : {kSteep, kShallow}) {
        for (int i = 0; i < 200; ++i) {
            const double h = uh(rng), s = us(rng);
            const double fd =
                oracle::central_difference([&](double x) { return approx_kernel(p, s, x); }, h);
            const double got = approx_kernel_div(p, s, h);
            CHECK(std::abs(got - fd) <= 1e-6 * std::max(std::abs(fd), 1.0));
        }
    }
    CHECK(approx_kernel_div(kSteep, 1e-4, kPi / (2.0 * kSteep.omega)) == doctest::Approx(0.0));
    CHECK(approx_kernel_div(kSteep, 1e-4, 0.0) == 0.0);
    const double h = 0.05;
    const double a = kSteep.tau * kSteep.tau * kSteep.omega * kSteep.omega *
                     std::pow(std::cos(kSteep.omega * h), 2);
    CHECK(std::abs(approx_kernel_div(kSteep, 1.0 / (kSteep.lambda * a), h)) < 1e-9);
}

TEST_CASE("closed-form memory integrals match quadrature") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> uh(-2.0, 2.0);
    for (const auto& p : {kSteep, kShallow}) {
        for (int i = 0; i < 50; ++i) {
            const double h = uh(rng);
            const double upper = 50.0 / kernel_decay_rate(p, h);
            const auto closed = memory_integral_closed_form(p, h);
            const double drift_q = oracle::integrate(
                [&](double s) { return approx_kernel(p, s, h) * p.mu * h; }, 0.0, upper);
            const double div_q = oracle::integrate(
                [&](double s) { return -approx_kernel_div(p, s, h) / p.beta; }, 0.0, upper);
            CHECK(oracle::rel_err(closed.drift_term, drift_q) < 1e-6);
            CHECK(oracle::rel_err(closed.div_term, div_q) < 1e-6);
        }
    }
    const double h = kPi / kSteep.omega;
    const auto c = memory_integral_closed_form(kSteep, h);
    CHECK(c.drift_term == doctest::Approx(400.0 / 401.0 * kSteep.mu * h));
    CHECK(std::abs(c.div_term) < 1e-10);
}
