#pragma once

#include <Eigen/Dense>

namespace mzcg {

// Linear coarse-graining map h = Phi x together with the orthonormal
// complement Psi that selects the unresolved directions.
//
// For Phi of shape m x N with full row rank:
//   sigma_sq = Phi Phi^T,  sigma = sqrt(sigma_sq) (symmetric root)
//   phi_star = Phi^T sigma^-2
//   psi      : (N-m) x N with orthonormal rows, psi * phi_star = 0
// and phi_star * Phi + psi^T psi = I_N.
struct CGMap {
    Eigen::MatrixXd phi;
    Eigen::MatrixXd sigma;
    Eigen::MatrixXd sigma_sq;
    Eigen::MatrixXd sigma_inv;
    Eigen::MatrixXd phi_star;
    Eigen::MatrixXd psi;

    Eigen::Index resolved_dim() const { return phi.rows(); }
    Eigen::Index full_dim() const { return phi.cols(); }
    Eigen::Index unresolved_dim() const { return psi.rows(); }
};

struct Decomposition {
    Eigen::VectorXd h;
    Eigen::VectorXd xt;
};

// Relative singular-value threshold below which a selector counts as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

// Throws DimensionMismatch when m > N and RankDeficient when the smallest
// singular value of phi is below kRankTolerance times the largest.
// Each row of psi is oriented so that its first entry with magnitude above
// 1e-12 is positive.
CGMap build_cg_map(const Eigen::MatrixXd& phi);

Decomposition decompose(const CGMap& map, const Eigen::VectorXd& x);

Eigen::VectorXd reconstruct(const CGMap& map, const Eigen::VectorXd& h,
                            const Eigen::VectorXd& xt);

}  // namespace mzcg
