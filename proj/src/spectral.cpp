#include "specmatch/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace specmatch {

void SpectralGrid::validate() const {
    if (start_nm != 400 || end_nm != 700 || step_nm != 10 || size() != kBands) {
        throw FormatError("spectral grid must be 400:10:700 (31 bands), got " +
                          std::to_string(start_nm) + ":" + std::to_string(step_nm) +
                          ":" + std::to_string(end_nm));
    }
}

const SpectralGrid& SpectralGrid::standard() {
    static const SpectralGrid grid{};
    return grid;
}

Spectrum::Spectrum(Eigen::ArrayXd v, SpectrumKind k) : values(std::move(v)), kind(k) {
    if (values.size() != SpectralGrid::kBands) {
        throw FormatError("spectrum must have exactly 31 samples, got " +
                          std::to_string(values.size()));
    }
    if (!values.isFinite().all()) {
        throw DomainError("spectrum contains non-finite values");
    }
    if (kind == SpectrumKind::reflectance) {
        if (values.minCoeff() < -1e-9 || values.maxCoeff() > 1.05) {
            throw DomainError("reflectance values must lie in [0, 1.05], got range [" +
                              std::to_string(values.minCoeff()) + ", " +
                              std::to_string(values.maxCoeff()) + "]");
        }
    }
}

SensorSet::SensorSet(Eigen::MatrixXd sensitivities) : m(std::move(sensitivities)) {
    if (m.rows() != SpectralGrid::kBands || m.cols() != 3) {
        throw FormatError("sensor set must be 31x3");
    }
    if (m.minCoeff() < -1e-9) {
        throw DomainError("sensor sensitivities must be nonnegative");
    }
    for (int k = 0; k < 3; ++k) {
        if (m.col(k).maxCoeff() <= 0.0) {
            throw DomainError("sensor channel " + std::to_string(k) +
                              " has no positive response");
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) {
        throw RankError("sensor set does not have full column rank");
    }
}

Spectrum resample(const std::vector<std::pair<double, double>>& raw,
                  const SpectralGrid& grid, SpectrumKind kind) {
    grid.validate();
    if (raw.size() < 2) {
        throw FormatError("resample needs at least two samples");
    }
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].first <= raw[i - 1].first) {
            throw FormatError("wavelengths must be strictly increasing near " +
                              std::to_string(raw[i].first) + " nm");
        }
    }
    if (raw.front().first > grid.start_nm || raw.back().first < grid.end_nm) {
        throw RangeError("data covers [" + std::to_string(raw.front().first) + ", " +
                         std::to_string(raw.back().first) + "] nm but the grid needs [" +
                         std::to_string(grid.start_nm) + ", " +
                         std::to_string(grid.end_nm) + "] nm");
    }

    Eigen::ArrayXd out(grid.size());
    std::size_t seg = 0;
    for (int i = 0; i < grid.size(); ++i) {
        const double lambda = grid.wavelength(i);
        while (seg + 2 < raw.size() && raw[seg + 1].first < lambda) ++seg;
        const auto& [x0, y0] = raw[seg];
        const auto& [x1, y1] = raw[seg + 1];
        const double t = (lambda - x0) / (x1 - x0);
        out[i] = y0 + t * (y1 - y0);
    }
    return Spectrum(std::move(out), kind);
}

Spectrum diag_mul(const Spectrum& a, const Spectrum& b) {
    return Spectrum(a.values * b.values, SpectrumKind::generic);
}

Tristimulus sensor_response(const SensorSet& q, const Spectrum& e, const Spectrum& r) {
    return q.m.transpose() * (e.values * r.values).matrix();
}

std::pair<Eigen::Matrix3d, double> luther_residual(const SensorSet& q,
                                                   const Eigen::MatrixXd& reference) {
    if (reference.rows() != SpectralGrid::kBands || reference.cols() != 3) {
        throw FormatError("reference sensitivities must be 31x3");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(q.m);
    qr.setThreshold(1e-12);
    if (qr.rank() < 3) {
        throw RankError("Q^T Q is singular; cannot fit a correction matrix");
    }
    const Eigen::Matrix3d m = qr.solve(reference);
    const double residual = (q.m * m - reference).norm();
    return {m, residual};
}

} // namespace specmatch
