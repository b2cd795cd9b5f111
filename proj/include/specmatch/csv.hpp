#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specmatch/spectral.hpp"

namespace specmatch {

/// A named collection of spectra read from a spectral CSV
/// (`wavelength_nm,<name1>,<name2>,...`, one row per wavelength).
/// Columns are resampled onto the standard grid at load time.
struct SpectralTable {
    std::vector<std::string> names;
    Eigen::MatrixXd values; // 31 x names.size()

    int find(const std::string& name) const;           // -1 when absent
    Eigen::VectorXd column(const std::string& name) const; // throws FormatError
    Spectrum spectrum(int col, SpectrumKind kind = SpectrumKind::generic) const;
};

SpectralTable read_spectral_csv(const std::filesystem::path& path);

void write_spectral_csv(const std::filesystem::path& path,
                        const std::vector<std::string>& names,
                        const Eigen::MatrixXd& values,
                        const SpectralGrid& grid = SpectralGrid::standard());

} // namespace specmatch
