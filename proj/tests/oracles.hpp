#pragma once

// Brute-force reference computations used by both the unit tests and the
// acceptance suite. These stay independent of the library's solver paths.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace specmatch::test {

/// Exhaustive quadratic-objective minimization over the [0,1]^k lattice.
inline double grid_min_objective(const Eigen::MatrixXd& G, const Eigen::VectorXd& d,
                                 double step) {
    const int k = static_cast<int>(G.cols());
    const Eigen::MatrixXd a = G.transpose() * G;
    const Eigen::VectorXd b = G.transpose() * d;
    const double dd = d.squaredNorm();
    const int npts = static_cast<int>(std::lround(1.0 / step)) + 1;

    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd c(k);
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    while (true) {
        for (int i = 0; i < k; ++i) c[i] = idx[static_cast<std::size_t>(i)] * step;
        best = std::min(best, c.dot(a * c) - 2.0 * c.dot(b) + dd);
        int pos = 0;
        while (pos < k) {
            if (++idx[static_cast<std::size_t>(pos)] < npts) break;
            idx[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == k) break;
    }
    return best;
}

/// Largest violation of the box-constrained least-squares KKT conditions.
inline double kkt_residual(const Eigen::MatrixXd& G, const Eigen::VectorXd& d,
                           const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                           const Eigen::VectorXd& x) {
    const Eigen::VectorXd grad = G.transpose() * (G * x - d);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double btol = 1e-12 * std::max(1.0, std::abs(x[i]));
        if (x[i] <= lo[i] + btol) {
            worst = std::max(worst, -grad[i]);
        } else if (x[i] >= hi[i] - btol) {
            worst = std::max(worst, grad[i]);
        } else {
            worst = std::max(worst, std::abs(grad[i]));
        }
    }
    return worst;
}

} // namespace specmatch::test
