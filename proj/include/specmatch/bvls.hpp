#pragma once

#include <Eigen/Dense>

#include "specmatch/errors.hpp"

namespace specmatch {

struct BvlsOptions {
    int max_iterations = 0;   // 0: scale with problem size
    double kkt_tol = 1e-12;   // relative to max(1, |G^T d|_inf)
};

/// Bounded-variable least squares: argmin |G c - d|^2 subject to lo <= c <= hi
/// componentwise. Active-set method (Lawson-Hanson style with upper bounds);
/// KKT conditions hold exactly at termination. Bounds may be infinite.
/// Zero columns of G are fixed at their lower bound.
/// Throws NonConvergenceError (carrying the best iterate) at the iteration cap.
Eigen::VectorXd bvls(const Eigen::MatrixXd& G, const Eigen::VectorXd& d,
                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                     const BvlsOptions& opts = {});

/// bvls on the unit box [0, 1]^k.
Eigen::VectorXd bvls01(const Eigen::MatrixXd& G, const Eigen::VectorXd& d,
                       const BvlsOptions& opts = {});

/// bvls with c >= lo only (upper bounds at infinity).
Eigen::VectorXd bvls_lower(const Eigen::MatrixXd& G, const Eigen::VectorXd& d,
                           double lo = 0.0, const BvlsOptions& opts = {});

} // namespace specmatch
