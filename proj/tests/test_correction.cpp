#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specmatch/correction.hpp"
#include "specmatch/datasets.hpp"
#include "specmatch/illuminator.hpp"
#include "specmatch/matcher.hpp"

#include "test_util.hpp"

using namespace specmatch;

namespace {

std::vector<ColorSample> random_samples(Rng& rng, int n) {
    std::vector<ColorSample> out;
    for (int i = 0; i < n; ++i) {
        ColorSample s;
        s.rgb = Tristimulus(rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0),
                            rng.uniform(0.05, 1.0));
        s.xyz_truth = Tristimulus(rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0),
                                  rng.uniform(0.05, 1.0));
        s.id = "s" + std::to_string(i);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

TEST_CASE("summarize basics") {
    const DeltaEStats s = summarize({1.0, 2.0, 3.0});
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.median == doctest::Approx(2.0));
    CHECK(s.max == doctest::Approx(3.0));
    CHECK(s.n == 3);

    const DeltaEStats c = summarize({0.7, 0.7, 0.7, 0.7});
    CHECK(c.mean == doctest::Approx(0.7));
    CHECK(c.median == doctest::Approx(0.7));
    CHECK(c.p95 == doctest::Approx(0.7));
    CHECK(c.p99 == doctest::Approx(0.7));
    CHECK(c.max == doctest::Approx(0.7));

    const DeltaEStats one = summarize({1.3});
    CHECK(one.mean == one.median);
    CHECK(one.mean == one.max);

    CHECK_THROWS_AS(summarize({}), DomainError);
}

TEST_CASE("percentiles match a sort-based oracle") {
    Rng rng(401);
    std::vector<double> values(1995);
    for (auto& v : values) v = rng.uniform(0.0, 10.0);
    const DeltaEStats s = summarize(values);

    // independent oracle: sorted order statistics, inclusive interpolation
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&sorted](double p) {
        const double h = p / 100.0 * (static_cast<double>(sorted.size()) - 1.0);
        const auto lo = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(lo);
        if (lo + 1 >= sorted.size()) return sorted.back();
        return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
    };
    CHECK(s.p95 == doctest::Approx(pct(95.0)).epsilon(1e-12));
    CHECK(s.p99 == doctest::Approx(pct(99.0)).epsilon(1e-12));
    CHECK(s.median == doctest::Approx(pct(50.0)).epsilon(1e-12));
    CHECK(s.p95 <= s.p99);
    CHECK(s.p99 <= s.max);
}

TEST_CASE("correct_fit closed form and invariances") {
    Rng rng(402);

    SUBCASE("identity when rgb equals xyz") {
        auto samples = random_samples(rng, 12);
        for (auto& s : samples) s.xyz_truth = s.rgb;
        const Eigen::Matrix3d m = correct_fit(samples);
        CHECK((m - Eigen::Matrix3d::Identity()).norm() < 1e-10);
    }

    SUBCASE("matches the normal-equations oracle") {
        const auto samples = random_samples(rng, 4);
        const Eigen::Matrix3d m = correct_fit(samples);
        Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
        Eigen::Matrix3d atb = Eigen::Matrix3d::Zero();
        for (const auto& s : samples) {
            ata += s.rgb * s.rgb.transpose();
            atb += s.rgb * s.xyz_truth.transpose();
        }
        const Eigen::Matrix3d oracle = ata.ldlt().solve(atb);
        CHECK((m - oracle).norm() <= 1e-9 * std::max(1.0, oracle.norm()));
    }

    SUBCASE("diagonal premultiplication returns D^-1 M") {
        const auto samples = random_samples(rng, 24);
        const Eigen::Matrix3d m = correct_fit(samples);
        const Eigen::Vector3d dvec(2.0, 0.5, 1.25);
        auto scaled = samples;
        for (auto& s : scaled) s.rgb = dvec.asDiagonal() * s.rgb;
        const Eigen::Matrix3d m2 = correct_fit(scaled);
        const Eigen::Matrix3d expected = dvec.cwiseInverse().asDiagonal() * m;
        CHECK((m2 - expected).norm() <= 1e-9 * expected.norm());
        // corrected outputs identical
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Tristimulus a = m.transpose() * samples[i].rgb;
            const Tristimulus b = m2.transpose() * scaled[i].rgb;
            CHECK((a - b).norm() <= 1e-9 * a.norm());
        }
    }

    SUBCASE("degenerate sample sets are rejected") {
        auto samples = random_samples(rng, 8);
        for (auto& s : samples) s.rgb = Tristimulus(1.0, 2.0, 3.0) * s.rgb[0];
        CHECK_THROWS_AS(correct_fit(samples), RankError);
        CHECK_THROWS_AS(correct_fit(random_samples(rng, 2)), RankError);
    }
}

TEST_CASE("white_balance basics") {
    const std::vector<Tristimulus> rgbs = {{0.2, 0.4, 0.6}, {1.0, 1.0, 1.0}};
    const auto same = white_balance(rgbs, Tristimulus::Ones());
    CHECK((same[0] - rgbs[0]).norm() == 0.0);

    const auto unit = white_balance({Tristimulus(0.3, 0.5, 0.9)}, Tristimulus(0.3, 0.5, 0.9));
    CHECK((unit[0] - Tristimulus::Ones()).norm() < 1e-15);

    CHECK_THROWS_AS(white_balance(rgbs, Tristimulus(1.0, 0.0, 1.0)), DomainError);
}

TEST_CASE("evaluate: Luther camera scores zero error") {
    const CmfSet cmf = data::load_cmf();
    Eigen::Matrix3d t;
    t << 0.7, 0.2, 0.1, 0.05, 0.85, 0.1, 0.1, 0.05, 0.9;
    const SensorSet camera(cmf.m * t);
    const auto chart = data::to_reflectances(data::load_chart());
    const Spectrum d65 = data::load_illuminant("D65");

    const EvaluationReport r = evaluate(camera, d65, d65, chart, cmf);
    CHECK(r.stats.max < 1e-9);
}

TEST_CASE("evaluate: capture-light scaling and camera white balance are absorbed") {
    const CmfSet cmf = data::load_cmf();
    const SensorSet camera = data::load_camera();
    const auto chart = data::to_reflectances(data::load_chart());
    const Spectrum d65 = data::load_illuminant("D65");
    const Spectrum capture = data::load_illuminant("D65_anchor");

    const EvaluationReport base = evaluate(camera, d65, capture, chart, cmf);
    CHECK(base.stats.mean > 0.01); // non-colorimetric camera, nonzero error

    // positive scaling of the capture light
    const Spectrum bright(3.7 * capture.values, SpectrumKind::illuminant);
    const EvaluationReport scaled = evaluate(camera, d65, bright, chart, cmf);
    for (std::size_t i = 0; i < base.delta_e.size(); ++i) {
        CHECK(scaled.delta_e[i] == doctest::Approx(base.delta_e[i]).epsilon(1e-9));
    }

    // per-channel diagonal scaling of the camera (white balance invariance)
    Eigen::MatrixXd qd = camera.m;
    qd.col(0) *= 1.9;
    qd.col(1) *= 0.6;
    qd.col(2) *= 1.2;
    const EvaluationReport wb = evaluate(SensorSet(qd), d65, capture, chart, cmf);
    for (std::size_t i = 0; i < base.delta_e.size(); ++i) {
        CHECK(wb.delta_e[i] == doctest::Approx(base.delta_e[i]).epsilon(1e-9));
    }

    // explicit white_balance path: dividing RGBs by the white RGB
    std::vector<ColorSample> samples;
    std::vector<Tristimulus> rgbs;
    for (const auto& r : chart) rgbs.push_back(sensor_response(camera, capture, r));
    const Tristimulus white_rgb =
        sensor_response(camera, capture, test::constant_spectrum(1.0));
    const auto balanced = white_balance(rgbs, white_rgb);
    for (std::size_t i = 0; i < chart.size(); ++i) {
        samples.push_back({balanced[i], xyz_of(d65, chart[i], cmf), ""});
    }
    const EvaluationReport wb2 = evaluate_samples(samples, white_of(d65, cmf));
    for (std::size_t i = 0; i < base.delta_e.size(); ++i) {
        CHECK(wb2.delta_e[i] == doctest::Approx(base.delta_e[i]).epsilon(1e-9));
    }
}

TEST_CASE("evaluate: single reflectance degenerates the statistics") {
    const CmfSet cmf = data::load_cmf();
    const SensorSet camera = data::load_camera();
    const Spectrum d65 = data::load_illuminant("D65");
    // one spectrum cannot determine the correction, so use three copies of a
    // tiny chart and check the stats collapse on the per-sample errors
    const auto chart = data::to_reflectances(data::load_chart());
    const std::vector<Spectrum> one = {chart[0], chart[5], chart[12]};
    const EvaluationReport r = evaluate(camera, d65, d65, one, cmf);
    CHECK(r.stats.n == 3);
    CHECK(r.stats.max == doctest::Approx(*std::max_element(r.delta_e.begin(),
                                                           r.delta_e.end())));
}

TEST_CASE("evaluate feeds on synthesized RGB samples") {
    const CmfSet cmf = data::load_cmf();
    const SensorSet camera = data::load_camera();
    const Spectrum d65 = data::load_illuminant("D65");
    const auto chart = data::to_reflectances(data::load_chart());

    std::vector<ColorSample> samples;
    for (const auto& r : chart) {
        samples.push_back({sensor_response(camera, d65, r), xyz_of(d65, r, cmf), ""});
    }
    const EvaluationReport direct = evaluate(camera, d65, d65, chart, cmf);
    const EvaluationReport via_samples = evaluate_samples(samples, white_of(d65, cmf));
    CHECK(via_samples.stats.mean == doctest::Approx(direct.stats.mean).epsilon(1e-12));
}
