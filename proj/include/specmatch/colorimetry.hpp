#pragma once

#include <utility>

#include <Eigen/Dense>

#include "specmatch/spectral.hpp"

namespace specmatch {

/// CIE color matching functions, columns xbar, ybar, zbar on the standard
/// grid. The ybar column must peak at 550 or 560 nm (sanity check against
/// misaligned or transposed tables).
struct CmfSet {
    Eigen::MatrixXd m;

    CmfSet() : m(Eigen::MatrixXd::Zero(SpectralGrid::kBands, 3)) {}
    explicit CmfSet(Eigen::MatrixXd cmf);
};

struct LabColor {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Tristimulus of the perfect diffuser under the measurement illuminant.
struct WhitePoint {
    Tristimulus xyz;

    explicit WhitePoint(Tristimulus t);
};

/// XYZ = X^T diag(e) r, relative scale (normalization lives in WhitePoint).
Tristimulus xyz_of(const Spectrum& e, const Spectrum& r, const CmfSet& cmf);

/// White point of an illuminant: XYZ of the perfect (unit) diffuser.
WhitePoint white_of(const Spectrum& e, const CmfSet& cmf);

/// CIE 1976 L*a*b* with the standard two-branch transfer function.
LabColor xyz_to_lab(const Tristimulus& t, const WhitePoint& w);

/// Inverse of xyz_to_lab (round-trip support for verification).
Tristimulus lab_to_xyz(const LabColor& lab, const WhitePoint& w);

/// Euclidean distance in Lab.
double delta_e_ab(const LabColor& p, const LabColor& q);

/// CIE 1976 uniform chromaticity: u' = 4X/(X+15Y+3Z), v' = 9Y/(X+15Y+3Z).
std::pair<double, double> uv_prime(const Tristimulus& t);

} // namespace specmatch
