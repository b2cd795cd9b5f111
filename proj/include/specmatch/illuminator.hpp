#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specmatch/colorimetry.hpp"
#include "specmatch/spectral.hpp"

namespace specmatch {

enum class IlluminatorMode { simple, complex };

IlluminatorMode parse_mode(const std::string& name); // "simple" | "complex"

/// Measured characterization of a multi-channel LED illuminator:
/// spd[j].col(i) is the SPD of channel i driven at intensity level w[j].
/// Level 0 is zero drive (all-zero spectra), the last level is full drive.
struct IlluminatorModel {
    Eigen::VectorXd levels_w;          // L entries in [0,1], strictly increasing
    std::vector<Eigen::MatrixXd> spd;  // L matrices, 31 x k each

    int channels() const { return spd.empty() ? 0 : static_cast<int>(spd.front().cols()); }
    int levels() const { return static_cast<int>(spd.size()); }

    /// Enforces the characterization invariants; throws with the offending
    /// channel/level in the message.
    void validate() const;
};

/// Per-level spectra divided by their intensity level. Level 0 (0/0) takes
/// the shape of the lowest measured level.
struct NormalizedModel {
    Eigen::VectorXd levels_w;
    std::vector<Eigen::MatrixXd> shapes;

    static NormalizedModel from(const IlluminatorModel& model);
};

/// Immutable pairing of a characterization with its normalized form.
class Illuminator {
public:
    explicit Illuminator(IlluminatorModel model);

    const IlluminatorModel& model() const { return model_; }
    const NormalizedModel& normalized() const { return normalized_; }
    int channels() const { return model_.channels(); }
    int levels() const { return model_.levels(); }

    /// Full-drive basis B: column i = A(i, L).
    Eigen::MatrixXd max_basis() const { return model_.spd.back(); }

    /// Normalized spectral shape of one channel at an arbitrary drive level,
    /// interpolated between the two neighbouring characterized levels.
    Eigen::VectorXd shape_at(int channel, double drive) const;

    /// Emitted spectrum of one channel: drive * shape_at(channel, drive).
    /// At characterized levels this reproduces the measured data exactly.
    Spectrum spectrum_at(int channel, double drive) const;

    /// simple: B * c with the full-drive basis. complex: sum of per-channel
    /// emitted spectra at their individual drives.
    Spectrum render(const Eigen::VectorXd& weights, IlluminatorMode mode) const;

    /// Groups of channels whose characterizations are identical at every
    /// level (physically duplicate LEDs).
    const std::vector<std::vector<int>>& duplicate_groups() const { return groups_; }

private:
    IlluminatorModel model_;
    NormalizedModel normalized_;
    std::vector<std::vector<int>> groups_;
};

struct MetamerOptions {
    double xyz_tol = 1e-6;        // relative XYZ equality tolerance
    double fixed_point_tol = 1e-10;
    int max_iterations = 300;
};

struct MetamerSolution {
    Eigen::VectorXd weights;  // in [0,1]
    double scale = 1.0;       // s with XYZ(light) == s * XYZ(target)
    Spectrum light;           // rendered in the requested mode
    Tristimulus xyz;
    double spectral_rel_error = 0.0; // |light - s*target| / |s*target|
    int iterations = 0;
};

/// Solves for channel weights whose rendered light has exactly the target's
/// relative XYZ while being spectrally closest to the (scaled) target.
/// The problem is positively homogeneous, so it is solved at unit scale with
/// weights >= 0 and the solution is then scaled to touch the unit box.
/// Throws InfeasibleError when the target chromaticity is outside the gamut.
MetamerSolution solve_metamer(const Illuminator& illum, const Spectrum& target,
                              const CmfSet& cmf, IlluminatorMode mode,
                              const MetamerOptions& opts = {});

// ---------------------------------------------------------------------------
// Characterization files: JSON manifest + spectral CSV.

IlluminatorModel load_characterization(const std::filesystem::path& manifest_path);

void write_characterization(const std::filesystem::path& out_dir,
                            const std::string& stem, const IlluminatorModel& model);

// ---------------------------------------------------------------------------
// Synthetic characterization, shaped like the physical device: 8 narrow
// channels from blue to red plus two identical broad yellowish channels,
// peaks drifting toward longer wavelengths as drive decreases.

struct SyntheticLedParams {
    int levels = 11;
    double shift_nm = 17.0; // largest peak shift across channels (lowest vs full drive)

    std::vector<double> narrow_centers = {415, 445, 475, 505, 525, 615, 645, 675};
    std::vector<double> narrow_sigmas = {11, 12, 12, 13, 14, 13, 13, 14};
    std::vector<double> narrow_powers = {0.55, 0.95, 0.80, 0.60, 0.45, 0.85, 1.00, 0.50};
    // per-channel shift as a fraction of shift_nm; channel 5 carries the max
    std::vector<double> narrow_shift_frac = {2.0 / 17, 3.0 / 17, 5.0 / 17, 10.0 / 17,
                                             1.0, 2.0 / 17, 1.0 / 17, 1.0 / 17};
    double broad_center = 575;
    double broad_sigma = 62;
    double broad_power = 0.70;
    double broad_shift_frac = 4.0 / 17;
    int broad_count = 2;
};

IlluminatorModel synthetic_illuminator(const SyntheticLedParams& params = {});

// ---------------------------------------------------------------------------
// Drift analysis (peak shift and chromaticity walk across drive levels).

struct ChannelDrift {
    int channel = 0;
    double peak_full_nm = 0.0;        // at full drive
    double peak_low_nm = 0.0;         // at the lowest nonzero drive
    double peak_shift_nm = 0.0;       // |low - full|
    std::vector<std::pair<double, double>> uv_by_level; // u'v' per nonzero level
    double uv_drift = 0.0;            // max distance to the full-drive u'v'
};

/// Sub-grid peak location via parabolic interpolation on log power.
double spectral_peak_nm(const Eigen::VectorXd& spd);

std::vector<ChannelDrift> characterize_drift(const IlluminatorModel& model,
                                             const CmfSet& cmf);

} // namespace specmatch
