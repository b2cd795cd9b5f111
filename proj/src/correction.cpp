#include "specmatch/correction.hpp"

#include <algorithm>
#include <cmath>

namespace specmatch {

DeltaEStats summarize(std::vector<double> errors) {
    if (errors.empty()) throw DomainError("summarize: empty error list");
    std::sort(errors.begin(), errors.end());
    const std::size_t n = errors.size();

    auto percentile = [&errors, n](double p) {
        const double h = p / 100.0 * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = h - static_cast<double>(lo);
        return errors[lo] + frac * (errors[hi] - errors[lo]);
    };

    DeltaEStats s;
    s.n = n;
    double sum = 0.0;
    for (double e : errors) sum += e;
    s.mean = sum / static_cast<double>(n);
    s.median = n % 2 == 1 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
    s.p95 = percentile(95.0);
    s.p99 = percentile(99.0);
    s.max = errors.back();
    return s;
}

Eigen::Matrix3d correct_fit(const std::vector<ColorSample>& samples) {
    if (samples.size() < 3) {
        throw RankError("correction fit needs at least 3 samples, got " +
                        std::to_string(samples.size()));
    }
    Eigen::MatrixXd rgb(samples.size(), 3);
    Eigen::MatrixXd xyz(samples.size(), 3);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        rgb.row(static_cast<Eigen::Index>(i)) = samples[i].rgb.transpose();
        xyz.row(static_cast<Eigen::Index>(i)) = samples[i].xyz_truth.transpose();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rgb);
    qr.setThreshold(1e-11);
    if (qr.rank() < 3) {
        throw RankError("sample RGBs are rank deficient; correction matrix is not determined");
    }
    return qr.solve(xyz);
}

std::vector<Tristimulus> white_balance(const std::vector<Tristimulus>& rgbs,
                                       const Tristimulus& white_rgb) {
    if (!(white_rgb.array() > 0.0).all()) {
        throw DomainError("white balance reference must be strictly positive");
    }
    std::vector<Tristimulus> out;
    out.reserve(rgbs.size());
    for (const auto& rgb : rgbs) {
        out.push_back(rgb.cwiseQuotient(white_rgb));
    }
    return out;
}

EvaluationReport evaluate_samples(const std::vector<ColorSample>& samples,
                                  const WhitePoint& white) {
    EvaluationReport report;
    report.correction = correct_fit(samples);
    report.delta_e.reserve(samples.size());
    for (const auto& s : samples) {
        const Tristimulus predicted =
            (report.correction.transpose() * s.rgb).cwiseMax(0.0);
        const LabColor lab_pred = xyz_to_lab(predicted, white);
        const LabColor lab_true = xyz_to_lab(s.xyz_truth.cwiseMax(0.0), white);
        report.delta_e.push_back(delta_e_ab(lab_pred, lab_true));
    }
    report.stats = summarize(report.delta_e);
    return report;
}

EvaluationReport evaluate(const SensorSet& camera, const Spectrum& e_measure,
                          const Spectrum& e_capture,
                          const std::vector<Spectrum>& reflectances, const CmfSet& cmf) {
    if (reflectances.empty()) throw DomainError("evaluate: no reflectances given");
    std::vector<ColorSample> samples;
    samples.reserve(reflectances.size());
    for (std::size_t i = 0; i < reflectances.size(); ++i) {
        ColorSample s;
        s.rgb = sensor_response(camera, e_capture, reflectances[i]);
        s.xyz_truth = xyz_of(e_measure, reflectances[i], cmf);
        s.id = "r" + std::to_string(i);
        samples.push_back(std::move(s));
    }
    return evaluate_samples(samples, white_of(e_measure, cmf));
}

} // namespace specmatch
