#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specmatch/colorimetry.hpp"
#include "specmatch/spectral.hpp"

namespace specmatch {

/// One measured patch: camera RGB plus the ground-truth XYZ under the
/// measurement light.
struct ColorSample {
    Tristimulus rgb;
    Tristimulus xyz_truth;
    std::string id;
};

struct DeltaEStats {
    double mean = 0.0;
    double median = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

/// Mean, median (midpoint for even n), percentiles by linear interpolation
/// between closest ranks (inclusive convention), max.
DeltaEStats summarize(std::vector<double> errors);

/// Least-squares color correction: M = argmin sum |M^T rgb_i - xyz_i|^2.
Eigen::Matrix3d correct_fit(const std::vector<ColorSample>& samples);

/// Componentwise division by the white RGB (diagonal correction for
/// non-uniform lighting). The evaluation result is invariant to it.
std::vector<Tristimulus> white_balance(const std::vector<Tristimulus>& rgbs,
                                       const Tristimulus& white_rgb);

struct EvaluationReport {
    DeltaEStats stats;
    std::vector<double> delta_e;  // per sample, input order
    Eigen::Matrix3d correction = Eigen::Matrix3d::Identity();
};

/// Fits the correction on all samples jointly, predicts, and scores
/// delta E*ab in Lab under the given white. Predicted XYZ is floored at zero
/// before the Lab conversion.
EvaluationReport evaluate_samples(const std::vector<ColorSample>& samples,
                                  const WhitePoint& white);

/// Full synthetic pipeline: camera RGBs under the capture light, ground truth
/// under the measurement light, joint correction fit, delta E statistics.
/// e_capture == e_measure gives the native-camera row of the reports.
EvaluationReport evaluate(const SensorSet& camera, const Spectrum& e_measure,
                          const Spectrum& e_capture,
                          const std::vector<Spectrum>& reflectances, const CmfSet& cmf);

} // namespace specmatch
