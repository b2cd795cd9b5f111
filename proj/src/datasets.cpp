#include "specmatch/datasets.hpp"

#include <algorithm>
#include <cmath>

#include "specmatch/rng.hpp"

#ifndef SPECMATCH_DATA_DIR
#define SPECMATCH_DATA_DIR "data"
#endif

namespace specmatch::data {

std::filesystem::path default_dir() {
    return std::filesystem::path(SPECMATCH_DATA_DIR);
}

CmfSet load_cmf(const std::filesystem::path& csv) {
    const auto table = read_spectral_csv(csv);
    Eigen::MatrixXd m(SpectralGrid::kBands, 3);
    m.col(0) = table.column("xbar");
    m.col(1) = table.column("ybar");
    m.col(2) = table.column("zbar");
    return CmfSet(std::move(m));
}

Spectrum load_illuminant(const std::string& name, const std::filesystem::path& csv) {
    const auto table = read_spectral_csv(csv);
    return Spectrum(table.column(name).array(), SpectrumKind::illuminant);
}

SensorSet load_camera(const std::filesystem::path& csv) {
    const auto table = read_spectral_csv(csv);
    Eigen::MatrixXd m(SpectralGrid::kBands, 3);
    m.col(0) = table.column("R");
    m.col(1) = table.column("G");
    m.col(2) = table.column("B");
    return SensorSet(std::move(m));
}

SpectralTable load_chart(const std::filesystem::path& csv) {
    auto table = read_spectral_csv(csv);
    if (table.names.size() != 24) {
        throw FormatError("chart CSV must have 24 patch columns, got " +
                          std::to_string(table.names.size()));
    }
    return table;
}

std::vector<Spectrum> load_reflectances(const std::filesystem::path& csv) {
    return to_reflectances(read_spectral_csv(csv));
}

std::vector<Spectrum> to_reflectances(const SpectralTable& table) {
    std::vector<Spectrum> out;
    out.reserve(table.names.size());
    for (std::size_t i = 0; i < table.names.size(); ++i) {
        out.push_back(table.spectrum(static_cast<int>(i), SpectrumKind::reflectance));
    }
    return out;
}

std::vector<Spectrum> synthetic_reflectances(int count, std::uint64_t seed) {
    if (count < 1) throw DomainError("synthetic reflectance count must be positive");
    const auto& grid = SpectralGrid::standard();
    Rng rng(seed);
    std::vector<Spectrum> out;
    out.reserve(static_cast<std::size_t>(count));

    for (int t = 0; t < count; ++t) {
        Eigen::ArrayXd r =
            Eigen::ArrayXd::Constant(SpectralGrid::kBands, rng.uniform(0.03, 0.35));
        const int bumps = rng.uniform_int(1, 3);
        for (int b = 0; b < bumps; ++b) {
            const double amp = rng.uniform(-0.30, 0.55);
            const double mu = rng.uniform(420.0, 680.0);
            const double sigma = rng.uniform(45.0, 130.0);
            for (int i = 0; i < SpectralGrid::kBands; ++i) {
                const double z = (grid.wavelength(i) - mu) / sigma;
                r[i] += amp * std::exp(-0.5 * z * z);
            }
        }
        if (rng.uniform() < 0.6) {
            const double amp = rng.uniform(0.05, 0.60);
            const double edge = rng.uniform(490.0, 650.0);
            const double tau = rng.uniform(18.0, 50.0);
            for (int i = 0; i < SpectralGrid::kBands; ++i) {
                r[i] += amp / (1.0 + std::exp(-(grid.wavelength(i) - edge) / tau));
            }
        }
        out.emplace_back(r.cwiseMax(0.01).cwiseMin(0.97), SpectrumKind::reflectance);
    }
    return out;
}

} // namespace specmatch::data
