#include "mzcg/cg_geometry.hpp"

#include <string>

#include "mzcg/error.hpp"

namespace mzcg {

namespace {

void orient_rows(Eigen::MatrixXd& rows) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            if (std::abs(rows(i, j)) > 1e-12) {
                if (rows(i, j) < 0.0) rows.row(i) *= -1.0;
                break;
            }
        }
    }
}

}  // namespace

CGMap build_cg_map(const Eigen::MatrixXd& phi) {
    const Eigen::Index m = phi.rows();
    const Eigen::Index n = phi.cols();
    if (m == 0 || n == 0) {
        throw DimensionMismatch("selector must be non-empty");
    }
    if (m > n) {
        throw DimensionMismatch("selector has more rows (" + std::to_string(m) +
                                ") than columns (" + std::to_string(n) + ")");
    }

    // Phi = U D V^T. Then sigma = U D U^T, phi_star = V_m D^-1 U^T and the
    // trailing N-m right singular vectors (the right singular vectors of
    // sigma^-1 Phi = U V_m^T) span the complement used for psi.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& d = svd.singularValues();
    if (!(d(m - 1) > kRankTolerance * d(0))) {
        throw RankDeficient("selector is rank deficient: singular values span [" +
                            std::to_string(d(m - 1)) + ", " + std::to_string(d(0)) + "]");
    }
    const Eigen::MatrixXd& u = svd.matrixU();
    const Eigen::MatrixXd& v = svd.matrixV();
    const Eigen::VectorXd d_inv = d.cwiseInverse();

    CGMap map;
    map.phi = phi;
    map.sigma_sq = phi * phi.transpose();
    map.sigma = u * d.asDiagonal() * u.transpose();
    map.sigma_inv = u * d_inv.asDiagonal() * u.transpose();
    map.phi_star = v.leftCols(m) * d_inv.asDiagonal() * u.transpose();
    map.psi = v.rightCols(n - m).transpose();
    orient_rows(map.psi);
    return map;
}

Decomposition decompose(const CGMap& map, const Eigen::VectorXd& x) {
    if (x.size() != map.full_dim()) {
        throw DimensionMismatch("decompose: expected vector of size " +
                                std::to_string(map.full_dim()) + ", got " +
                                std::to_string(x.size()));
    }
    return {map.phi * x, map.psi * x};
}

Eigen::VectorXd reconstruct(const CGMap& map, const Eigen::VectorXd& h,
                            const Eigen::VectorXd& xt) {
    if (h.size() != map.resolved_dim() || xt.size() != map.unresolved_dim()) {
        throw DimensionMismatch("reconstruct: expected sizes (" +
                                std::to_string(map.resolved_dim()) + ", " +
                                std::to_string(map.unresolved_dim()) + "), got (" +
                                std::to_string(h.size()) + ", " + std::to_string(xt.size()) +
                                ")");
    }
    Eigen::VectorXd x = map.phi_star * h;
    if (xt.size() > 0) x += map.psi.transpose() * xt;
    return x;
}

}  // namespace mzcg
