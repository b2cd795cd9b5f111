#include "specmatch/bvls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace specmatch {

namespace {

enum class Status { lower, upper, free_var, frozen };

double bound_scale(double lo, double hi) {
    double s = 1.0;
    if (std::isfinite(lo)) s = std::max(s, std::abs(lo));
    if (std::isfinite(hi)) s = std::max(s, std::abs(hi));
    return s;
}

} // namespace

Eigen::VectorXd bvls(const Eigen::MatrixXd& G, const Eigen::VectorXd& d,
                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                     const BvlsOptions& opts) {
    const Eigen::Index m = G.rows();
    const Eigen::Index k = G.cols();
    if (d.size() != m || lo.size() != k || hi.size() != k) {
        throw FormatError("bvls: dimension mismatch");
    }
    for (Eigen::Index i = 0; i < k; ++i) {
        if (!(lo[i] <= hi[i])) {
            throw DomainError("bvls: lo > hi at coordinate " + std::to_string(i));
        }
    }

    std::vector<Status> status(static_cast<std::size_t>(k));
    Eigen::VectorXd x(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        if (G.col(i).norm() == 0.0) {
            // a coordinate with no influence stays at its lower bound
            status[i] = Status::frozen;
            x[i] = std::isfinite(lo[i]) ? lo[i] : (std::isfinite(hi[i]) ? std::min(hi[i], 0.0) : 0.0);
        } else if (std::isfinite(lo[i])) {
            status[i] = Status::lower;
            x[i] = lo[i];
        } else if (std::isfinite(hi[i])) {
            status[i] = Status::upper;
            x[i] = hi[i];
        } else {
            status[i] = Status::free_var;
            x[i] = 0.0;
        }
    }

    const double grad_scale = std::max(1.0, (G.transpose() * d).lpNorm<Eigen::Infinity>());
    const double w_tol = opts.kkt_tol * grad_scale;
    const int max_outer = opts.max_iterations > 0
                              ? opts.max_iterations
                              : std::max<int>(100, 12 * static_cast<int>(k));

    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_x = x;
    std::vector<char> banned(static_cast<std::size_t>(k), 0);

    auto free_solve = [&](Eigen::VectorXd& z, std::vector<Eigen::Index>& fidx) {
        fidx.clear();
        for (Eigen::Index i = 0; i < k; ++i) {
            if (status[i] == Status::free_var) fidx.push_back(i);
        }
        if (fidx.empty()) return;
        Eigen::MatrixXd Gf(m, static_cast<Eigen::Index>(fidx.size()));
        for (std::size_t c = 0; c < fidx.size(); ++c) Gf.col(static_cast<Eigen::Index>(c)) = G.col(fidx[c]);
        Eigen::VectorXd rhs = d;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (status[i] != Status::free_var && x[i] != 0.0) rhs -= G.col(i) * x[i];
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Gf);
        z = qr.solve(rhs);
    };

    for (int outer = 0; outer < max_outer; ++outer) {
        const Eigen::VectorXd w = G.transpose() * (d - G * x); // negative gradient
        Eigen::Index enter = -1;
        double enter_mag = w_tol;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (banned[i] || status[i] == Status::frozen) continue;
            const bool wants_up = status[i] == Status::lower && w[i] > enter_mag;
            const bool wants_down = status[i] == Status::upper && w[i] < -enter_mag;
            if (wants_up || wants_down) {
                enter = i;
                enter_mag = std::abs(w[i]);
            }
        }
        if (enter < 0) {
            return x; // KKT satisfied
        }
        status[enter] = Status::free_var;

        // inner loop: restricted least squares, stepping back to bounds
        for (Eigen::Index inner = 0; inner <= k + 1; ++inner) {
            Eigen::VectorXd z;
            std::vector<Eigen::Index> fidx;
            free_solve(z, fidx);

            bool feasible = true;
            double alpha = 1.0;
            Eigen::Index blocker = -1;
            for (std::size_t c = 0; c < fidx.size(); ++c) {
                const Eigen::Index i = fidx[c];
                const double zi = z[static_cast<Eigen::Index>(c)];
                double bound = 0.0;
                bool violated = false;
                if (zi < lo[i]) {
                    bound = lo[i];
                    violated = true;
                } else if (zi > hi[i]) {
                    bound = hi[i];
                    violated = true;
                }
                if (!violated) continue;
                feasible = false;
                const double denom = zi - x[i];
                const double step = std::abs(denom) > 0.0 ? (bound - x[i]) / denom : 0.0;
                if (step < alpha) {
                    alpha = step;
                    blocker = i;
                }
            }

            if (feasible) {
                for (std::size_t c = 0; c < fidx.size(); ++c) x[fidx[c]] = z[static_cast<Eigen::Index>(c)];
                break;
            }

            if (blocker == enter && alpha <= 1e-12) {
                // entering variable cannot leave its bound; pin it and move on
                x[enter] = w[enter] > 0.0 ? lo[enter] : hi[enter];
                status[enter] = w[enter] > 0.0 ? Status::lower : Status::upper;
                banned[enter] = 1;
                break;
            }

            for (std::size_t c = 0; c < fidx.size(); ++c) {
                const Eigen::Index i = fidx[c];
                x[i] += alpha * (z[static_cast<Eigen::Index>(c)] - x[i]);
            }
            // bind every free variable that reached a bound
            for (Eigen::Index i : fidx) {
                const double tol = 1e-13 * bound_scale(lo[i], hi[i]);
                if (x[i] <= lo[i] + tol) {
                    x[i] = lo[i];
                    status[i] = Status::lower;
                } else if (x[i] >= hi[i] - tol) {
                    x[i] = hi[i];
                    status[i] = Status::upper;
                }
            }
            if (blocker >= 0 && status[blocker] == Status::free_var) {
                x[blocker] = z.size() ? std::clamp(x[blocker], lo[blocker], hi[blocker]) : x[blocker];
                status[blocker] = x[blocker] <= lo[blocker] ? Status::lower : Status::upper;
                x[blocker] = status[blocker] == Status::lower ? lo[blocker] : hi[blocker];
            }
        }

        const double obj = (G * x - d).squaredNorm();
        if (obj < best_obj - 1e-15 * std::max(1.0, best_obj)) {
            best_obj = obj;
            best_x = x;
            std::fill(banned.begin(), banned.end(), 0);
        }
    }

    throw NonConvergenceError(
        "bvls: iteration cap reached (" + std::to_string(max_outer) + ")",
        std::vector<double>(best_x.data(), best_x.data() + best_x.size()));
}

Eigen::VectorXd bvls01(const Eigen::MatrixXd& G, const Eigen::VectorXd& d,
                       const BvlsOptions& opts) {
    const Eigen::Index k = G.cols();
    return bvls(G, d, Eigen::VectorXd::Zero(k), Eigen::VectorXd::Ones(k), opts);
}

Eigen::VectorXd bvls_lower(const Eigen::MatrixXd& G, const Eigen::VectorXd& d,
                           double lo, const BvlsOptions& opts) {
    const Eigen::Index k = G.cols();
    return bvls(G, d, Eigen::VectorXd::Constant(k, lo),
                Eigen::VectorXd::Constant(k, std::numeric_limits<double>::infinity()),
                opts);
}

} // namespace specmatch
