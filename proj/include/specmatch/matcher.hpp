#pragma once

#include <vector>

#include <Eigen/Dense>

#include "specmatch/colorimetry.hpp"
#include "specmatch/illuminator.hpp"
#include "specmatch/spectral.hpp"

namespace specmatch {

/// One matched-illumination problem: find channel weights c and a 3x3
/// correction M minimizing |diag(B c) Q M - diag(e) X|_F^2 over 0 <= c <= 1.
struct MatchProblem {
    Spectrum e_target;        // the desired measurement light
    SensorSet camera;         // Q
    CmfSet cmf;               // X
    const Illuminator* illum = nullptr;
    IlluminatorMode mode = IlluminatorMode::simple;
    Eigen::VectorXd c_guess;  // starting weights; empty selects all-ones
    double tol = 1e-8;        // on the squared-Frobenius stopping quantity
    int max_iters = 200;

    void validate() const;
};

struct MatchResult {
    Eigen::VectorXd weights;
    Eigen::Matrix3d correction = Eigen::Matrix3d::Identity();
    double objective = 0.0;
    int iterations = 0;
    std::vector<double> trace;       // objective after each iteration
    Eigen::MatrixXd basis_final;     // basis the objective was evaluated with
    bool converged = false;
};

/// Thrown when the complex solver's objective rises for several consecutive
/// iterations after a basis substitution; carries the best iterate seen.
class OscillationError : public Error {
public:
    OscillationError(const std::string& what, MatchResult best)
        : Error(what), best_result(std::move(best)) {}
    MatchResult best_result;
};

/// Closed-form least-squares correction matrix for fixed weights:
/// M = argmin |diag(B_eff c) Q M - diag(e) X|_F^2.
Eigen::Matrix3d fit_m(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights,
                      const SensorSet& camera, const Spectrum& e_target, const CmfSet& cmf);

/// Bounded least-squares weight update for fixed M (the objective is linear
/// in c): stacks the three spectral blocks and solves on [0, 1]^k.
Eigen::VectorXd step_c(const Eigen::Matrix3d& correction, const Eigen::MatrixXd& basis,
                       const SensorSet& camera, const Spectrum& e_target, const CmfSet& cmf);

/// |diag(B c) Q M - diag(e) X|_F^2
double match_objective(const Eigen::MatrixXd& basis, const Eigen::VectorXd& weights,
                       const Eigen::Matrix3d& correction, const SensorSet& camera,
                       const Spectrum& e_target, const CmfSet& cmf);

/// Alternating solver on the fixed full-drive basis.
MatchResult match_simple(const MatchProblem& problem);

/// Alternating solver with per-iteration basis substitution at the current
/// drives; returns the best iterate seen (substitution can break monotonicity).
MatchResult match_complex(const MatchProblem& problem);

/// Runs the requested solver from the problem's guess plus fallback guesses
/// (all-ones; for the complex mode also the simple solution) and returns the
/// result with the lowest final objective.
MatchResult match_best(const MatchProblem& problem);

} // namespace specmatch
