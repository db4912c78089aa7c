#include <random>

#include "doctest.h"
#include "mzcg/cg_geometry.hpp"
#include "mzcg/error.hpp"
#include "oracles.hpp"

using namespace mzcg;

namespace {

Eigen::MatrixXd row(std::initializer_list<double> v) {
    Eigen::MatrixXd m(1, static_cast<Eigen::Index>(v.size()));
    Eigen::Index j = 0;
    for (double x : v) m(0, j++) = x;
    return m;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index j = 0;
    for (double x : v) out(j++) = x;
    return out;
}

double partition_error(const CGMap& map) {
    const auto n = map.full_dim();
    return (map.phi_star * map.phi + map.psi.transpose() * map.psi -
            Eigen::MatrixXd::Identity(n, n))
        .norm();
}

}  // namespace

TEST_CASE("coordinate selector (1 0)") {
    const auto map = build_cg_map(row({1.0, 0.0}));
    CHECK(map.sigma(0, 0) == doctest::Approx(1.0));
    CHECK(map.phi_star(0, 0) == doctest::Approx(1.0));
    CHECK(std::abs(map.phi_star(1, 0)) < 1e-15);
    REQUIRE(map.psi.rows() == 1);
    CHECK(std::abs(map.psi(0, 0)) < 1e-15);
    CHECK(map.psi(0, 1) == doctest::Approx(1.0));  // canonical orientation

    const auto d = decompose(map, vec({2.0, 5.0}));
    CHECK(d.h(0) == doctest::Approx(2.0));
    CHECK(d.xt(0) == doctest::Approx(5.0));
    const auto x = reconstruct(map, vec({2.0}), vec({5.0}));
    CHECK(x(0) == doctest::Approx(2.0));
    CHECK(x(1) == doctest::Approx(5.0));
}

TEST_CASE("identity selector leaves no unresolved directions") {
    const auto map = build_cg_map(Eigen::MatrixXd::Identity(2, 2));
    CHECK((map.sigma - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
    CHECK((map.phi_star - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);
    CHECK(map.psi.rows() == 0);
    CHECK(map.psi.cols() == 2);
    CHECK(partition_error(map) < 1e-15);

    const auto d = decompose(map, vec({1.0, 2.0}));
    CHECK(d.h(0) == doctest::Approx(1.0));
    CHECK(d.h(1) == doctest::Approx(2.0));
    CHECK(d.xt.size() == 0);
}

TEST_CASE("selector (3 4)") {
    const auto map = build_cg_map(row({3.0, 4.0}));
    CHECK(map.sigma(0, 0) == doctest::Approx(5.0));
    CHECK(map.sigma_sq(0, 0) == doctest::Approx(25.0));
    CHECK(map.phi_star(0, 0) == doctest::Approx(3.0 / 25.0));
    CHECK(map.phi_star(1, 0) == doctest::Approx(4.0 / 25.0));
    CHECK(map.psi(0, 0) == doctest::Approx(4.0 / 5.0));
    CHECK(map.psi(0, 1) == doctest::Approx(-3.0 / 5.0));

    // Direct arithmetic with the hand-computed factors.
    Eigen::Matrix2d expected_sum = Eigen::Vector2d(3.0 / 25, 4.0 / 25) * Eigen::RowVector2d(3, 4) +
                                   Eigen::Vector2d(0.8, -0.6) * Eigen::RowVector2d(0.8, -0.6);
    CHECK((expected_sum - Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK(partition_error(map) < 1e-14);

    const auto d = decompose(map, vec({1.0, 1.0}));
    CHECK(d.h(0) == doctest::Approx(7.0));
    CHECK(d.xt(0) == doctest::Approx(0.2));
    const auto x = reconstruct(map, vec({7.0}), vec({0.2}));
    CHECK(x(0) == doctest::Approx(1.0));
    CHECK(x(1) == doctest::Approx(1.0));
}

TEST_CASE("invalid selectors") {
    Eigen::MatrixXd deficient(2, 3);
    deficient << 1, 2, 3, 2, 4, 6;
    CHECK_THROWS_AS(build_cg_map(deficient), RankDeficient);
    CHECK_THROWS_AS(build_cg_map(Eigen::MatrixXd::Ones(3, 2)), DimensionMismatch);
    CHECK_THROWS_AS(build_cg_map(row({0.0, 0.0})), RankDeficient);
}

TEST_CASE("shape mismatches") {
    const auto map = build_cg_map(row({1.0, 0.0}));
    CHECK_THROWS_AS(decompose(map, vec({1.0, 2.0, 3.0})), DimensionMismatch);
    CHECK_THROWS_AS(reconstruct(map, vec({1.0, 2.0}), vec({1.0})), DimensionMismatch);
    CHECK_THROWS_AS(reconstruct(map, vec({1.0}), Eigen::VectorXd()), DimensionMismatch);
}

TEST_CASE("random selectors: partition of identity, orthogonality, round trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst_partition = 0.0, worst_orth = 0.0, worst_psi = 0.0, worst_trip = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto phi = oracle::random_selector(rng);
        const auto map = build_cg_map(phi);
        const auto k = map.unresolved_dim();
        worst_partition = std::max(worst_partition, partition_error(map));
        worst_orth = std::max(worst_orth, (map.psi * map.phi_star).norm());
        worst_psi = std::max(
            worst_psi, (map.psi * map.psi.transpose() - Eigen::MatrixXd::Identity(k, k)).norm());
        CHECK((map.sigma - map.sigma.transpose()).norm() < 1e-12);
        CHECK((map.sigma * map.sigma - map.sigma_sq).norm() < 1e-10 * map.sigma_sq.norm());

        Eigen::VectorXd x(map.full_dim());
        for (auto& v : x) v = u(rng);
        const auto d = decompose(map, x);
        worst_trip = std::max(worst_trip, (reconstruct(map, d.h, d.xt) - x).norm());
    }
    CHECK(worst_partition < 1e-12);
    CHECK(worst_orth < 1e-12);
    CHECK(worst_psi < 1e-12);
    CHECK(worst_trip < 1e-10);
}
