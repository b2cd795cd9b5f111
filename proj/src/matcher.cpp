#include "specmatch/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specmatch/bvls.hpp"
#include "specmatch/jsonio.hpp"

namespace specmatch {

void MatchProblem::validate() const {
    if (illum == nullptr) throw FormatError("match problem has no illuminator");
    if (!(tol > 0.0)) throw DomainError("match tolerance must be positive");
    if (max_iters < 1) throw DomainError("max_iters must be at least 1");
    if (c_guess.size() != 0) {
        if (c_guess.size() != illum->channels()) {
            throw FormatError("guess size does not match channel count");
        }
        if (c_guess.minCoeff() < 0.0 || c_guess.maxCoeff() > 1.0) {
            throw DomainError("guess weights must lie in [0, 1]");
        }
    }
}

Eigen::Matrix3d fit_m(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights,
                      const SensorSet& camera, const Spectrum& e_target, const CmfSet& cmf) {
    const Eigen::VectorXd light = basis * weights;
    const Eigen::MatrixXd effective = light.asDiagonal() * camera.m; // diag(Bc) Q
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(effective);
    qr.setThreshold(1e-11);
    if (qr.rank() < 3) {
        throw RankError("effective sensor matrix diag(Bc)Q is rank deficient "
                        "(weights drive too narrow a spectrum)");
    }
    const Eigen::MatrixXd target = e_target.values.matrix().asDiagonal() * cmf.m;
    return qr.solve(target);
}

Eigen::VectorXd step_c(const Eigen::Matrix3d& correction, const Eigen::MatrixXd& basis,
                       const SensorSet& camera, const Spectrum& e_target, const CmfSet& cmf) {
    constexpr int n = SpectralGrid::kBands;
    const int k = static_cast<int>(basis.cols());
    const Eigen::MatrixXd qm = camera.m * correction; // 31 x 3

    // objective rows indexed by (band, output channel); linear in the weights
    Eigen::MatrixXd G(3 * n, k);
    Eigen::VectorXd d(3 * n);
    for (int j = 0; j < 3; ++j) {
        G.middleRows(j * n, n) = basis.array().colwise() * qm.col(j).array();
        d.segment(j * n, n) = e_target.values * cmf.m.col(j).array();
    }
    return bvls01(G, d);
}

double match_objective(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights,
                       const Eigen::Matrix3d& correction, const SensorSet& camera,
                       const Spectrum& e_target, const CmfSet& cmf) {
    const Eigen::VectorXd light = basis * weights;
    const Eigen::MatrixXd lhs = light.asDiagonal() * (camera.m * correction);
    const Eigen::MatrixXd rhs = e_target.values.matrix().asDiagonal() * cmf.m;
    return (lhs - rhs).squaredNorm();
}

namespace {

Eigen::VectorXd initial_guess(const MatchProblem& p) {
    if (p.c_guess.size() != 0) return p.c_guess;
    return Eigen::VectorXd::Ones(p.illum->channels());
}

/// Stopping quantity of the alternating solvers:
/// |diag(B c) Q M - diag(B c_prev) Q M_prev|_F^2, both terms under the same basis.
double stop_quantity(const Eigen::MatrixXd& basis, const SensorSet& camera,
                     const Eigen::VectorXd& c, const Eigen::Matrix3d& m,
                     const Eigen::VectorXd& c_prev, const Eigen::Matrix3d& m_prev) {
    const Eigen::MatrixXd cur = (basis * c).asDiagonal() * (camera.m * m);
    const Eigen::MatrixXd prev = (basis * c_prev).asDiagonal() * (camera.m * m_prev);
    return (cur - prev).squaredNorm();
}

} // namespace

MatchResult match_simple(const MatchProblem& p) {
    p.validate();
    const Eigen::MatrixXd basis = p.illum->max_basis();
    Eigen::VectorXd c = initial_guess(p);
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();

    MatchResult result;
    for (int it = 1; it <= p.max_iters; ++it) {
        const Eigen::VectorXd c_prev = c;
        const Eigen::Matrix3d m_prev = m;
        try {
            m = fit_m(basis, c, p.camera, p.e_target, p.cmf);
        } catch (const RankError& e) {
            throw RankError(std::string(e.what()) + " at iteration " + std::to_string(it));
        }
        c = step_c(m, basis, p.camera, p.e_target, p.cmf);
        result.trace.push_back(match_objective(basis, c, m, p.camera, p.e_target, p.cmf));
        result.iterations = it;
        if (stop_quantity(basis, p.camera, c, m, c_prev, m_prev) < p.tol) {
            result.converged = true;
            break;
        }
    }
    result.weights = c;
    result.correction = m;
    result.objective = result.trace.back();
    result.basis_final = basis;
    return result;
}

MatchResult match_complex(const MatchProblem& p) {
    p.validate();
    const auto& illum = *p.illum;
    Eigen::MatrixXd basis = illum.max_basis();
    Eigen::VectorXd c = initial_guess(p);
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();

    MatchResult best;
    best.objective = std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    double prev_obj = std::numeric_limits<double>::infinity();
    int rises = 0;

    for (int it = 1; it <= p.max_iters; ++it) {
        const Eigen::VectorXd c_prev = c;
        const Eigen::Matrix3d m_prev = m;
        try {
            m = fit_m(basis, c, p.camera, p.e_target, p.cmf);
        } catch (const RankError& e) {
            throw RankError(std::string(e.what()) + " at iteration " + std::to_string(it));
        }
        c = step_c(m, basis, p.camera, p.e_target, p.cmf);
        // substitute the power-normalized shapes at the drives just chosen
        for (int i = 0; i < illum.channels(); ++i) {
            basis.col(i) = illum.shape_at(i, std::clamp(c[i], 0.0, 1.0));
        }
        const double obj = match_objective(basis, c, m, p.camera, p.e_target, p.cmf);
        trace.push_back(obj);

        if (obj < best.objective) {
            best.objective = obj;
            best.weights = c;
            best.correction = m;
            best.basis_final = basis;
        }
        rises = obj > prev_obj + 1e-14 * std::max(1.0, prev_obj) ? rises + 1 : 0;
        prev_obj = obj;
        if (rises >= 5) {
            best.trace = trace;
            best.iterations = it;
            throw OscillationError("complex matcher objective rose for 5 consecutive "
                                   "iterations (best objective " +
                                       format_sig(best.objective) + ")",
                                   best);
        }

        best.iterations = it;
        if (stop_quantity(basis, p.camera, c, m, c_prev, m_prev) < p.tol) {
            best.converged = true;
            break;
        }
    }
    best.trace = trace;
    return best;
}

MatchResult match_best(const MatchProblem& p) {
    p.validate();
    const int k = p.illum->channels();

    std::vector<Eigen::VectorXd> guesses;
    if (p.c_guess.size() != 0) guesses.push_back(p.c_guess);
    guesses.push_back(Eigen::VectorXd::Ones(k));

    auto run = [&p](IlluminatorMode mode, const Eigen::VectorXd& guess) -> MatchResult {
        MatchProblem q = p;
        q.mode = mode;
        q.c_guess = guess;
        if (mode == IlluminatorMode::simple) return match_simple(q);
        try {
            return match_complex(q);
        } catch (const OscillationError& e) {
            return e.best_result; // oscillation still yields a usable iterate
        }
    };

    MatchResult best_simple;
    best_simple.objective = std::numeric_limits<double>::infinity();
    for (const auto& g : guesses) {
        MatchResult r = run(IlluminatorMode::simple, g);
        if (r.objective < best_simple.objective) best_simple = std::move(r);
    }
    if (p.mode == IlluminatorMode::simple) return best_simple;

    // the simple solution is a strong third starting point for the complex
    // solver: its first substitution evaluates that point under the true shapes
    guesses.push_back(best_simple.weights);
    MatchResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for (const auto& g : guesses) {
        MatchResult r = run(IlluminatorMode::complex, g);
        if (r.objective < best.objective) best = std::move(r);
    }
    return best;
}

} // namespace specmatch
