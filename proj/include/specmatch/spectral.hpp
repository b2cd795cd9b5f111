#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specmatch/errors.hpp"

namespace specmatch {

/// Sampling of the visible range used throughout: 400 nm to 700 nm in 10 nm
/// steps, 31 bands. All spectra in one computation share this grid.
struct SpectralGrid {
    int start_nm = 400;
    int end_nm = 700;
    int step_nm = 10;

    static constexpr int kBands = 31;

    int size() const { return (end_nm - start_nm) / step_nm + 1; }
    double wavelength(int i) const { return start_nm + static_cast<double>(i) * step_nm; }

    /// Throws FormatError unless this is the standard 31-band grid.
    void validate() const;

    static const SpectralGrid& standard();

    bool operator==(const SpectralGrid&) const = default;
};

enum class SpectrumKind { illuminant, reflectance, generic };

/// A radiometric or reflectance function sampled on the standard grid.
/// Values are dimensionless relative quantities; reflectances must lie in
/// [0, 1.05] (5% headroom for measured data).
struct Spectrum {
    Eigen::ArrayXd values;
    SpectrumKind kind = SpectrumKind::generic;

    Spectrum() : values(Eigen::ArrayXd::Zero(SpectralGrid::kBands)) {}
    Spectrum(Eigen::ArrayXd v, SpectrumKind k = SpectrumKind::generic);

    double operator[](int i) const { return values[i]; }
    int size() const { return static_cast<int>(values.size()); }
    double sum() const { return values.sum(); }
};

/// Camera spectral sensitivities, one column per channel (R, G, B).
/// Nonnegative, 31 x 3, full column rank.
struct SensorSet {
    Eigen::MatrixXd m;

    SensorSet() : m(Eigen::MatrixXd::Zero(SpectralGrid::kBands, 3)) {}
    explicit SensorSet(Eigen::MatrixXd sensitivities);

    Eigen::VectorXd column(int k) const { return m.col(k); }
};

/// A camera RGB triplet or an XYZ triplet.
using Tristimulus = Eigen::Vector3d;

/// Piecewise-linear resampling of measured (wavelength, value) pairs onto the
/// grid. The raw data must cover the full grid; values are never extrapolated.
Spectrum resample(const std::vector<std::pair<double, double>>& raw,
                  const SpectralGrid& grid = SpectralGrid::standard(),
                  SpectrumKind kind = SpectrumKind::generic);

/// Per-wavelength product, diag(a) * b. Result kind is generic.
Spectrum diag_mul(const Spectrum& a, const Spectrum& b);

/// Camera response rho = Q^T diag(e) r. No normalization is applied; the
/// wavelength step is folded into whatever correction matrix follows.
Tristimulus sensor_response(const SensorSet& q, const Spectrum& e, const Spectrum& r);

/// Best linear fit of the sensitivities to a reference set:
/// M = argmin |Q M - X|_F, residual = |Q M - X|_F. The residual is zero
/// exactly when the sensor set is a linear transform of the reference.
std::pair<Eigen::Matrix3d, double> luther_residual(const SensorSet& q,
                                                   const Eigen::MatrixXd& reference);

} // namespace specmatch
