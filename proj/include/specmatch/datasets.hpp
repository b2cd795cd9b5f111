#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "specmatch/colorimetry.hpp"
#include "specmatch/csv.hpp"
#include "specmatch/spectral.hpp"

namespace specmatch::data {

/// Directory holding the reference tables shipped with the project.
std::filesystem::path default_dir();

/// CIE 1931 2-degree color matching functions on the standard grid.
CmfSet load_cmf(const std::filesystem::path& csv = default_dir() / "cie_1931_2deg_cmf.csv");

/// Named illuminant SPD. Shipped columns: D65, A (CIE tabulations) and
/// D65_anchor (a smooth D65 variant pinned to the relative XYZ
/// (0.9385, 1.0000, 1.0472) of the measured reference setup).
Spectrum load_illuminant(const std::string& name,
                         const std::filesystem::path& csv = default_dir() / "illuminants.csv");

/// Representative DSLR camera sensitivities (columns R, G, B).
SensorSet load_camera(const std::filesystem::path& csv = default_dir() / "camera_dslr.csv");

/// 24-patch chart reflectances in the classic layout (18 chromatic + 6
/// neutrals), as a named table.
SpectralTable load_chart(const std::filesystem::path& csv = default_dir() / "macbeth_24.csv");

/// All columns of a spectral CSV as reflectance spectra.
std::vector<Spectrum> load_reflectances(const std::filesystem::path& csv);

std::vector<Spectrum> to_reflectances(const SpectralTable& table);

/// Seeded synthetic reflectance set in the style of large benchmark
/// collections: smooth spectra built from a base level, a few gaussian bumps
/// and an optional band edge.
std::vector<Spectrum> synthetic_reflectances(int count, std::uint64_t seed);

} // namespace specmatch::data
