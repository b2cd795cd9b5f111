#include "specmatch/colorimetry.hpp"

#include <cmath>

namespace specmatch {

namespace {

constexpr double kLabEpsilon = 216.0 / 24389.0; // (6/29)^3
constexpr double kLabSlope = 841.0 / 108.0;     // 1 / (3 (6/29)^2)

double lab_f(double u) {
    return u > kLabEpsilon ? std::cbrt(u) : kLabSlope * u + 4.0 / 29.0;
}

double lab_f_inv(double y) {
    const double threshold = 6.0 / 29.0;
    return y > threshold ? y * y * y : (y - 4.0 / 29.0) / kLabSlope;
}

} // namespace

CmfSet::CmfSet(Eigen::MatrixXd cmf) : m(std::move(cmf)) {
    if (m.rows() != SpectralGrid::kBands || m.cols() != 3) {
        throw FormatError("color matching functions must be 31x3");
    }
    if (m.minCoeff() < -1e-9) {
        throw DomainError("color matching functions must be nonnegative");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) {
        throw RankError("color matching functions are rank deficient");
    }
    Eigen::Index peak = 0;
    m.col(1).maxCoeff(&peak);
    const double peak_nm = SpectralGrid::standard().wavelength(static_cast<int>(peak));
    if (peak_nm != 550.0 && peak_nm != 560.0) {
        throw FormatError("ybar peaks at " + std::to_string(peak_nm) +
                          " nm; expected 550 or 560 (misaligned table?)");
    }
}

WhitePoint::WhitePoint(Tristimulus t) : xyz(std::move(t)) {
    if (!(xyz.array() > 0.0).all()) {
        throw DomainError("white point components must be strictly positive");
    }
}

Tristimulus xyz_of(const Spectrum& e, const Spectrum& r, const CmfSet& cmf) {
    return cmf.m.transpose() * (e.values * r.values).matrix();
}

WhitePoint white_of(const Spectrum& e, const CmfSet& cmf) {
    return WhitePoint(cmf.m.transpose() * e.values.matrix());
}

LabColor xyz_to_lab(const Tristimulus& t, const WhitePoint& w) {
    if ((t.array() < -1e-9).any()) {
        throw DomainError("negative tristimulus component in Lab conversion");
    }
    const double fx = lab_f(std::max(t[0], 0.0) / w.xyz[0]);
    const double fy = lab_f(std::max(t[1], 0.0) / w.xyz[1]);
    const double fz = lab_f(std::max(t[2], 0.0) / w.xyz[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Tristimulus lab_to_xyz(const LabColor& lab, const WhitePoint& w) {
    const double fy = (lab.l + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    return {w.xyz[0] * lab_f_inv(fx), w.xyz[1] * lab_f_inv(fy), w.xyz[2] * lab_f_inv(fz)};
}

double delta_e_ab(const LabColor& p, const LabColor& q) {
    const double dl = p.l - q.l;
    const double da = p.a - q.a;
    const double db = p.b - q.b;
    return std::sqrt(dl * dl + da * da + db * db);
}

std::pair<double, double> uv_prime(const Tristimulus& t) {
    const double denom = t[0] + 15.0 * t[1] + 3.0 * t[2];
    if (!(denom > 0.0)) {
        throw DomainError("u'v' undefined: X + 15Y + 3Z must be positive");
    }
    return {4.0 * t[0] / denom, 9.0 * t[1] / denom};
}

} // namespace specmatch
