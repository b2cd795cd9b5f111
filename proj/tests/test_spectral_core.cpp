#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "specmatch/csv.hpp"
#include "specmatch/datasets.hpp"
#include "specmatch/spectral.hpp"

#include "test_util.hpp"

using namespace specmatch;
using test::constant_spectrum;
using test::random_spectrum;

TEST_CASE("grid is the fixed 31-band visible sampling") {
    const auto& g = SpectralGrid::standard();
    CHECK(g.size() == 31);
    CHECK(g.wavelength(0) == 400.0);
    CHECK(g.wavelength(30) == 700.0);
    CHECK_NOTHROW(g.validate());
    const SpectralGrid wrong{380, 700, 10};
    CHECK_THROWS_AS(wrong.validate(), FormatError);
}

TEST_CASE("spectrum construction enforces length and reflectance range") {
    CHECK_THROWS_AS(Spectrum(Eigen::ArrayXd::Zero(30)), FormatError);
    CHECK_THROWS_AS(Spectrum(Eigen::ArrayXd::Constant(31, 1.2), SpectrumKind::reflectance),
                    DomainError);
    CHECK_NOTHROW(Spectrum(Eigen::ArrayXd::Constant(31, 1.04), SpectrumKind::reflectance));
}

TEST_CASE("resample identity on data already on-grid") {
    Rng rng(11);
    const Spectrum s = random_spectrum(rng);
    std::vector<std::pair<double, double>> raw;
    const auto& g = SpectralGrid::standard();
    for (int i = 0; i < g.size(); ++i) raw.emplace_back(g.wavelength(i), s[i]);
    const Spectrum r = resample(raw);
    for (int i = 0; i < 31; ++i) CHECK(r[i] == doctest::Approx(s[i]).epsilon(1e-14));
}

TEST_CASE("resample interpolates linearly") {
    const Spectrum r = resample({{400.0, 0.0}, {700.0, 3.0}});
    CHECK(r[10] == doctest::Approx(1.0)); // 500 nm
    CHECK(r[0] == doctest::Approx(0.0));
    CHECK(r[30] == doctest::Approx(3.0));
}

TEST_CASE("resample of a 5nm table equals direct subsampling") {
    // smooth function tabulated at 5 nm; the 10 nm resample must hit the
    // tabulated values exactly (linear interpolation is exact at knots)
    std::vector<std::pair<double, double>> raw;
    auto f = [](double nm) { return 2.0 + std::sin(nm / 40.0) + nm / 900.0; };
    for (double nm = 400.0; nm <= 700.0; nm += 5.0) raw.emplace_back(nm, f(nm));
    const Spectrum r = resample(raw);
    const auto& g = SpectralGrid::standard();
    for (int i = 0; i < g.size(); ++i) {
        CHECK(r[i] == doctest::Approx(f(g.wavelength(i))).epsilon(1e-14));
    }
}

TEST_CASE("resample rejects bad input") {
    CHECK_THROWS_AS(resample({{420.0, 1.0}, {700.0, 1.0}}), RangeError);
    CHECK_THROWS_AS(resample({{400.0, 1.0}, {650.0, 1.0}}), RangeError);
    CHECK_THROWS_AS(resample({{400.0, 1.0}, {500.0, 1.0}, {500.0, 2.0}, {700.0, 1.0}}),
                    FormatError);
}

TEST_CASE("diag_mul basics and properties") {
    Rng rng(5);
    const Spectrum a = random_spectrum(rng);
    const Spectrum b = random_spectrum(rng);
    const Spectrum c = random_spectrum(rng);

    const Spectrum ones = constant_spectrum(1.0);
    CHECK((diag_mul(ones, a).values - a.values).abs().maxCoeff() == 0.0);

    const Spectrum half = constant_spectrum(0.5);
    CHECK(diag_mul(half, half).values.maxCoeff() == doctest::Approx(0.25));

    // commutative and associative to machine precision
    CHECK((diag_mul(a, b).values - diag_mul(b, a).values).abs().maxCoeff() < 1e-15);
    const auto lhs = diag_mul(diag_mul(a, b), c).values;
    const auto rhs = diag_mul(a, diag_mul(b, c)).values;
    CHECK((lhs - rhs).abs().maxCoeff() < 1e-15);

    // masking
    Eigen::ArrayXd box = Eigen::ArrayXd::Zero(31);
    box.head(16) = 1.0; // 400..550
    const Spectrum d65 = data::load_illuminant("D65");
    const Spectrum masked = diag_mul(d65, Spectrum(box));
    CHECK(masked[10] == doctest::Approx(d65[10]));
    CHECK(masked[20] == 0.0);
}

TEST_CASE("sensor_response is the plain weighted sum") {
    // all-ones columns are rank deficient, so bump two entries to keep rank 3
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(31, 3);
    m(0, 1) += 1.0;
    m(1, 2) += 1.0;
    const SensorSet q(m);
    const Spectrum e = constant_spectrum(1.0);
    const Spectrum r = constant_spectrum(1.0);
    const Tristimulus rho = sensor_response(q, e, r);
    CHECK(rho[0] == doctest::Approx(31.0));
    CHECK(rho[1] == doctest::Approx(32.0));

    CHECK(sensor_response(q, e, constant_spectrum(0.0)).norm() == 0.0);
}

TEST_CASE("sensor_response matches brute-force summation") {
    Rng rng(42);
    const Eigen::MatrixXd qm = test::random_matrix(rng, 31, 3, 0.0, 1.0);
    const SensorSet q(qm);
    const Spectrum e = random_spectrum(rng);
    const Spectrum r = random_spectrum(rng);
    const Tristimulus rho = sensor_response(q, e, r);
    for (int k = 0; k < 3; ++k) {
        double sum = 0.0;
        for (int i = 0; i < 31; ++i) sum += qm(i, k) * e[i] * r[i];
        CHECK(rho[k] == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("sensor_response is linear in the reflectance") {
    Rng rng(7);
    const SensorSet q(test::random_matrix(rng, 31, 3, 0.0, 1.0));
    const Spectrum e = random_spectrum(rng);
    const Spectrum r1 = random_spectrum(rng);
    const Spectrum r2 = random_spectrum(rng);
    const double alpha = 0.3, beta = 1.7;
    const Spectrum mix(alpha * r1.values + beta * r2.values);
    const Tristimulus lhs = sensor_response(q, e, mix);
    const Tristimulus rhs =
        alpha * sensor_response(q, e, r1) + beta * sensor_response(q, e, r2);
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("luther_residual is zero for linear transforms of the reference") {
    const CmfSet cmf = data::load_cmf();
    const SensorSet as_camera(cmf.m);
    auto [m_id, res_id] = luther_residual(as_camera, cmf.m);
    CHECK((m_id - Eigen::Matrix3d::Identity()).norm() < 1e-10);
    CHECK(res_id < 1e-10);

    Eigen::Matrix3d t;
    t << 0.9, 0.2, 0.05, 0.1, 1.1, 0.1, 0.02, 0.3, 0.8;
    const SensorSet mixed(cmf.m * t);
    auto [m_t, res_t] = luther_residual(mixed, cmf.m);
    CHECK(res_t < 1e-9);
    CHECK((m_t - t.inverse()).norm() < 1e-8);
}

TEST_CASE("real camera fails the Luther condition") {
    const CmfSet cmf = data::load_cmf();
    const SensorSet camera = data::load_camera();
    auto [m, res] = luther_residual(camera, cmf.m);
    CHECK(res > 0.1); // clearly non-colorimetric
    // residual is invariant under invertible right-multiplication of Q
    Eigen::Matrix3d t;
    t << 1.2, -0.1, 0.0, 0.05, 0.9, 0.2, 0.0, 0.1, 1.4;
    Eigen::MatrixXd qt = camera.m * t;
    // keep sensitivities nonnegative for the SensorSet invariant
    qt = qt.cwiseMax(0.0);
    // invariance holds for the exact product, so check via the raw solve
    const Eigen::MatrixXd q2 = camera.m * t;
    const Eigen::Matrix3d m2 = (q2.transpose() * q2).ldlt().solve(q2.transpose() * cmf.m);
    const double res2 = (q2 * m2 - cmf.m).norm();
    CHECK(res2 == doctest::Approx(res).epsilon(1e-9));
}

TEST_CASE("spectral csv round-trips through the standard grid") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "specmatch_test_csv";
    fs::create_directories(dir);
    const fs::path file = dir / "roundtrip.csv";

    Rng rng(3);
    Eigen::MatrixXd vals = test::random_matrix(rng, 31, 2, 0.0, 2.0);
    write_spectral_csv(file, {"alpha", "beta"}, vals);
    const SpectralTable t = read_spectral_csv(file);
    REQUIRE(t.names.size() == 2);
    CHECK(t.names[0] == "alpha");
    CHECK((t.values - vals).cwiseAbs().maxCoeff() < 1e-9);

    std::ofstream bad(dir / "bad.csv");
    bad << "nm,foo\n400,1\n700,2\n";
    bad.close();
    CHECK_THROWS_AS(read_spectral_csv(dir / "bad.csv"), FormatError);
}
