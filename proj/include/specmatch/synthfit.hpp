#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "specmatch/csv.hpp"
#include "specmatch/spectral.hpp"

namespace specmatch {

/// Best approximation of a target reflectance by a linear combination of at
/// most four candidate reflectances.
struct CombinationFit {
    std::array<int, 4> indices{};  // ascending, into the candidate pool
    Eigen::Vector4d coeffs = Eigen::Vector4d::Zero();
    double rel_error = 0.0;        // |target - fit| / |target|
};

/// Exhaustive search over all 4-subsets of the candidate pool; per subset an
/// unconstrained least-squares solve. Ties (within 1e-12 relative error) break
/// to the lexicographically smallest index tuple, which the ascending
/// enumeration yields for free.
CombinationFit fit_combination(const Spectrum& target,
                               const std::vector<Spectrum>& candidates);

/// RGB of the fitted combination from the measured candidate RGBs
/// (raw capture is linear, so the fit coefficients carry over).
Tristimulus synth_rgb(const CombinationFit& fit, const std::vector<Tristimulus>& rgbs);

/// Index of the achromatic patch to use: the neutral whose mean reflectance
/// is closest to 0.5.
int pick_achromatic(const std::vector<Spectrum>& neutrals);

/// The 19-candidate pool from a 24-patch chart laid out in the classic order
/// (18 chromatic patches then 6 neutrals): chromatic indices 0..17 plus the
/// picked achromatic. Returns indices into the chart.
std::vector<int> candidate_pool(const std::vector<Spectrum>& chart24);

} // namespace specmatch
