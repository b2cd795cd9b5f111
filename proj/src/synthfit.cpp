#include "specmatch/synthfit.hpp"

#include <cmath>
#include <limits>

namespace specmatch {

CombinationFit fit_combination(const Spectrum& target,
                               const std::vector<Spectrum>& candidates) {
    const int n = static_cast<int>(candidates.size());
    if (n < 4) throw FormatError("fit_combination needs at least 4 candidates");

    const Eigen::VectorXd t = target.values.matrix();
    const double tt = t.squaredNorm();
    if (tt <= 0.0) throw DegenerateError("fit target has zero norm");

    Eigen::MatrixXd pool(SpectralGrid::kBands, n);
    for (int i = 0; i < n; ++i) pool.col(i) = candidates[i].values.matrix();

    const Eigen::MatrixXd gram = pool.transpose() * pool;
    const Eigen::VectorXd proj = pool.transpose() * t;

    double best_r2 = std::numeric_limits<double>::infinity();
    std::array<int, 4> best_idx{};
    const double tie_tol = 1e-12 * tt;

    Eigen::Matrix4d gs;
    Eigen::Vector4d gp;
    for (int a = 0; a < n - 3; ++a) {
        for (int b = a + 1; b < n - 2; ++b) {
            for (int c = b + 1; c < n - 1; ++c) {
                for (int e = c + 1; e < n; ++e) {
                    const int idx[4] = {a, b, c, e};
                    for (int r = 0; r < 4; ++r) {
                        gp[r] = proj[idx[r]];
                        for (int s = 0; s < 4; ++s) gs(r, s) = gram(idx[r], idx[s]);
                    }
                    const Eigen::LDLT<Eigen::Matrix4d> ldlt(gs);
                    if (ldlt.info() != Eigen::Success) continue;
                    const Eigen::Vector4d x = ldlt.solve(gp);
                    const double r2 = tt - 2.0 * x.dot(gp) + x.dot(gs * x);
                    if (std::isfinite(r2) && r2 < best_r2 - tie_tol) {
                        best_r2 = r2;
                        best_idx = {a, b, c, e};
                    }
                }
            }
        }
    }
    if (!std::isfinite(best_r2)) {
        throw DegenerateError("no solvable 4-subset found");
    }

    // recompute the winner directly for full accuracy
    Eigen::MatrixXd sub(SpectralGrid::kBands, 4);
    for (int r = 0; r < 4; ++r) sub.col(r) = pool.col(best_idx[static_cast<std::size_t>(r)]);
    const Eigen::Vector4d coeffs = sub.colPivHouseholderQr().solve(t);

    CombinationFit fit;
    fit.indices = best_idx;
    fit.coeffs = coeffs;
    fit.rel_error = (t - sub * coeffs).norm() / std::sqrt(tt);
    return fit;
}

Tristimulus synth_rgb(const CombinationFit& fit, const std::vector<Tristimulus>& rgbs) {
    Tristimulus out = Tristimulus::Zero();
    for (int r = 0; r < 4; ++r) {
        const int idx = fit.indices[static_cast<std::size_t>(r)];
        if (idx < 0 || idx >= static_cast<int>(rgbs.size())) {
            throw FormatError("fit index " + std::to_string(idx) +
                              " outside the measured RGB list");
        }
        out += fit.coeffs[r] * rgbs[static_cast<std::size_t>(idx)];
    }
    return out;
}

int pick_achromatic(const std::vector<Spectrum>& neutrals) {
    if (neutrals.empty()) throw FormatError("no neutral patches given");
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < neutrals.size(); ++i) {
        const double mean = neutrals[i].values.mean();
        const double dist = std::abs(mean - 0.5);
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<int> candidate_pool(const std::vector<Spectrum>& chart24) {
    if (chart24.size() != 24) {
        throw FormatError("chart must have 24 patches, got " +
                          std::to_string(chart24.size()));
    }
    std::vector<Spectrum> neutrals(chart24.begin() + 18, chart24.end());
    const int achromatic = 18 + pick_achromatic(neutrals);
    std::vector<int> pool;
    pool.reserve(19);
    for (int i = 0; i < 18; ++i) pool.push_back(i);
    pool.push_back(achromatic);
    return pool;
}

} // namespace specmatch
