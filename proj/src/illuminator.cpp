#include "specmatch/illuminator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "specmatch/bvls.hpp"
#include "specmatch/csv.hpp"
#include "specmatch/jsonio.hpp"

namespace specmatch {

IlluminatorMode parse_mode(const std::string& name) {
    if (name == "simple") return IlluminatorMode::simple;
    if (name == "complex") return IlluminatorMode::complex;
    throw FormatError("unknown illuminator mode '" + name + "' (simple|complex)");
}

void IlluminatorModel::validate() const {
    const int L = levels();
    const int k = channels();
    if (L < 2) throw FormatError("characterization needs at least two intensity levels");
    if (k < 1) throw FormatError("characterization needs at least one channel");
    if (levels_w.size() != L) throw FormatError("intensity level vector size mismatch");
    if (levels_w[0] != 0.0) {
        throw FormatError("lowest intensity level must be 0, got " +
                          std::to_string(levels_w[0]));
    }
    if (levels_w[L - 1] != 1.0) {
        throw FormatError("highest intensity level must be 1, got " +
                          std::to_string(levels_w[L - 1]));
    }
    for (int j = 1; j < L; ++j) {
        if (!(levels_w[j] > levels_w[j - 1])) {
            throw FormatError("intensity levels must be strictly increasing at level " +
                              std::to_string(j + 1));
        }
    }
    for (int j = 0; j < L; ++j) {
        if (spd[j].rows() != SpectralGrid::kBands || spd[j].cols() != k) {
            throw FormatError("level " + std::to_string(j + 1) + " spectra are not 31x" +
                              std::to_string(k));
        }
        if (spd[j].minCoeff() < -1e-9) {
            throw FormatError("negative spectral power at level " + std::to_string(j + 1));
        }
    }
    if (spd[0].cwiseAbs().maxCoeff() > 1e-12) {
        throw FormatError("zero-drive spectra must be all zero");
    }
    for (int i = 0; i < k; ++i) {
        double prev = -1e-12;
        for (int j = 0; j < L; ++j) {
            const double power = spd[j].col(i).sum();
            if (power < prev - 1e-9 * std::max(1.0, prev)) {
                throw FormatError("channel " + std::to_string(i + 1) +
                                  ": total power decreases between levels " +
                                  std::to_string(j) + " and " + std::to_string(j + 1));
            }
            prev = power;
        }
        if (spd[L - 1].col(i).maxCoeff() <= 0.0) {
            throw FormatError("channel " + std::to_string(i + 1) + " emits no power at full drive");
        }
    }
}

NormalizedModel NormalizedModel::from(const IlluminatorModel& model) {
    NormalizedModel n;
    n.levels_w = model.levels_w;
    n.shapes.resize(model.spd.size());
    for (int j = 1; j < model.levels(); ++j) {
        n.shapes[j] = model.spd[j] / model.levels_w[j];
    }
    n.shapes[0] = n.shapes[1]; // zero drive has no shape of its own
    return n;
}

Illuminator::Illuminator(IlluminatorModel model) : model_(std::move(model)) {
    model_.validate();
    normalized_ = NormalizedModel::from(model_);

    const int k = model_.channels();
    std::vector<char> used(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
        if (used[i]) continue;
        std::vector<int> group{i};
        for (int j = i + 1; j < k; ++j) {
            if (used[j]) continue;
            bool same = true;
            for (int lvl = 0; lvl < model_.levels() && same; ++lvl) {
                const auto& a = model_.spd[lvl].col(i);
                const auto& b = model_.spd[lvl].col(j);
                same = (a - b).norm() <= 1e-12 * std::max(1.0, a.norm());
            }
            if (same) {
                group.push_back(j);
                used[j] = 1;
            }
        }
        groups_.push_back(std::move(group));
    }
}

Eigen::VectorXd Illuminator::shape_at(int channel, double drive) const {
    if (channel < 0 || channel >= channels()) {
        throw DomainError("channel index out of range");
    }
    if (drive < 0.0 || drive > 1.0) {
        throw DomainError("drive level " + std::to_string(drive) + " outside [0, 1]");
    }
    const auto& w = normalized_.levels_w;
    const int L = levels();
    if (drive <= w[0]) return normalized_.shapes[0].col(channel);
    if (drive >= w[L - 1]) return normalized_.shapes[L - 1].col(channel);
    int j = 1;
    while (j < L - 1 && !(drive < w[j])) ++j; // w[j-1] <= drive < w[j]
    const double a = (drive - w[j - 1]) / (w[j] - w[j - 1]);
    return (1.0 - a) * normalized_.shapes[j - 1].col(channel) +
           a * normalized_.shapes[j].col(channel);
}

Spectrum Illuminator::spectrum_at(int channel, double drive) const {
    return Spectrum(drive * shape_at(channel, drive).array(), SpectrumKind::illuminant);
}

Spectrum Illuminator::render(const Eigen::VectorXd& weights, IlluminatorMode mode) const {
    if (weights.size() != channels()) {
        throw FormatError("weight vector size does not match channel count");
    }
    if (weights.minCoeff() < -1e-12 || weights.maxCoeff() > 1.0 + 1e-12) {
        throw DomainError("channel weights must lie in [0, 1]");
    }
    if (mode == IlluminatorMode::simple) {
        return Spectrum((max_basis() * weights).array(), SpectrumKind::illuminant);
    }
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(SpectralGrid::kBands);
    for (int i = 0; i < channels(); ++i) {
        acc += spectrum_at(i, std::clamp(weights[i], 0.0, 1.0)).values;
    }
    return Spectrum(std::move(acc), SpectrumKind::illuminant);
}

// ---------------------------------------------------------------------------

namespace {

/// Characterization of the duplicate-collapsed model: each group of identical
/// channels acts as one channel (members driven equally), so the group SPD is
/// the member SPD times the group size.
struct EffectiveModel {
    std::vector<Eigen::MatrixXd> spd;    // per level, 31 x k_eff
    std::vector<Eigen::MatrixXd> shapes; // normalized
    Eigen::VectorXd levels_w;
    std::vector<std::vector<int>> groups;

    int channels() const { return static_cast<int>(groups.size()); }

    Eigen::VectorXd shape_at(int g, double drive) const {
        const int L = static_cast<int>(shapes.size());
        if (drive <= levels_w[0]) return shapes[0].col(g);
        if (drive >= levels_w[L - 1]) return shapes[L - 1].col(g);
        int j = 1;
        while (j < L - 1 && !(drive < levels_w[j])) ++j;
        const double a = (drive - levels_w[j - 1]) / (levels_w[j] - levels_w[j - 1]);
        return (1.0 - a) * shapes[j - 1].col(g) + a * shapes[j].col(g);
    }
};

EffectiveModel collapse(const Illuminator& illum) {
    EffectiveModel eff;
    eff.groups = illum.duplicate_groups();
    eff.levels_w = illum.model().levels_w;
    const int L = illum.levels();
    eff.spd.resize(L);
    eff.shapes.resize(L);
    for (int j = 0; j < L; ++j) {
        eff.spd[j].resize(SpectralGrid::kBands, eff.channels());
        eff.shapes[j].resize(SpectralGrid::kBands, eff.channels());
        for (int g = 0; g < eff.channels(); ++g) {
            const auto& members = eff.groups[g];
            eff.spd[j].col(g) =
                illum.model().spd[j].col(members.front()) * static_cast<double>(members.size());
            eff.shapes[j].col(g) =
                illum.normalized().shapes[j].col(members.front()) * static_cast<double>(members.size());
        }
    }
    return eff;
}

/// Equality-constrained nonnegative least squares at unit target scale:
/// min |B c - t| s.t. X^T B c = X^T t, c >= 0, via a penalty system with
/// deferred-correction refinement. Scaled into the unit box afterwards.
Eigen::VectorXd metamer_solve_at(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target,
                                 const Eigen::MatrixXd& cmf) {
    const Eigen::Matrix<double, 3, Eigen::Dynamic> xyz_of_basis = cmf.transpose() * basis;
    const Eigen::Vector3d b0 = cmf.transpose() * target;
    const double mu = 1e5 * basis.norm() / std::max(xyz_of_basis.norm(), 1e-300);

    Eigen::MatrixXd G(SpectralGrid::kBands + 3, basis.cols());
    G.topRows(SpectralGrid::kBands) = basis;
    G.bottomRows(3) = mu * xyz_of_basis;

    Eigen::VectorXd d(SpectralGrid::kBands + 3);
    d.head(SpectralGrid::kBands) = target;

    Eigen::Vector3d corr = Eigen::Vector3d::Zero();
    Eigen::VectorXd c;
    for (int refine = 0; refine < 4; ++refine) {
        d.tail(3) = mu * (b0 + corr);
        c = bvls_lower(G, d);
        corr += b0 - xyz_of_basis * c;
    }
    const double peak = c.maxCoeff();
    if (peak > 1.0) c /= peak;
    return c;
}

} // namespace

MetamerSolution solve_metamer(const Illuminator& illum, const Spectrum& target,
                              const CmfSet& cmf, IlluminatorMode mode,
                              const MetamerOptions& opts) {
    if (target.values.minCoeff() < -1e-12) {
        throw DomainError("metamer target must be nonnegative");
    }
    const Eigen::Vector3d target_xyz = cmf.m.transpose() * target.values.matrix();
    if (!(target_xyz.maxCoeff() > 0.0)) {
        throw DomainError("metamer target has zero tristimulus");
    }

    EffectiveModel eff = collapse(illum);
    const int ke = eff.channels();
    Eigen::MatrixXd basis = eff.spd.back();

    // gamut test: the target chromaticity must be a nonnegative combination
    // of the channel chromaticities
    {
        const Eigen::MatrixXd channel_xyz = cmf.m.transpose() * basis;
        const Eigen::VectorXd c = bvls_lower(channel_xyz, target_xyz);
        const double residual = (channel_xyz * c - target_xyz).norm() / target_xyz.norm();
        if (residual > opts.xyz_tol) {
            const auto [tu, tv] = uv_prime(target_xyz);
            std::string msg = "target chromaticity (u'=" + format_sig(tu) +
                              ", v'=" + format_sig(tv) + ") is outside the illuminator gamut;"
                              " channel chromaticities:";
            for (int i = 0; i < ke; ++i) {
                const auto [u, v] = uv_prime(Tristimulus(channel_xyz.col(i)));
                msg += " (" + format_sig(u) + "," + format_sig(v) + ")";
            }
            throw InfeasibleError(msg);
        }
    }

    Eigen::VectorXd c = metamer_solve_at(basis, target.values.matrix(), cmf.m);
    int iterations = 1;

    if (mode == IlluminatorMode::complex) {
        // fixed point on the drive vector: the basis must be built at the
        // drives that end up being used
        Eigen::VectorXd c_shape;
        double beta = 1.0;
        double prev_gap = std::numeric_limits<double>::infinity();
        bool converged = false;
        for (int it = 0; it < opts.max_iterations; ++it) {
            c_shape = (it == 0) ? c : (c_shape + beta * (c - c_shape)).eval();
            for (int g = 0; g < ke; ++g) {
                basis.col(g) = eff.shape_at(g, std::clamp(c_shape[g], 0.0, 1.0));
            }
            c = metamer_solve_at(basis, target.values.matrix(), cmf.m);
            ++iterations;
            const double gap = (c - c_shape).lpNorm<Eigen::Infinity>();
            if (gap < opts.fixed_point_tol) {
                converged = true;
                break;
            }
            if (gap > 0.7 * prev_gap) beta = std::max(beta * 0.5, 1.0 / 64.0);
            prev_gap = gap;
        }
        if (!converged) {
            throw NonConvergenceError(
                "metamer fixed-point iteration did not converge in " +
                    std::to_string(opts.max_iterations) + " iterations",
                std::vector<double>(c.data(), c.data() + c.size()));
        }
    }

    // expand group weights back to physical channels (equal drives)
    MetamerSolution sol;
    sol.weights = Eigen::VectorXd::Zero(illum.channels());
    for (int g = 0; g < ke; ++g) {
        for (int member : eff.groups[g]) sol.weights[member] = std::clamp(c[g], 0.0, 1.0);
    }
    sol.iterations = iterations;
    sol.light = illum.render(sol.weights, mode);
    sol.xyz = cmf.m.transpose() * sol.light.values.matrix();
    sol.scale = sol.xyz[1] / target_xyz[1];

    const double eq_residual =
        (sol.xyz - sol.scale * target_xyz).norm() / (sol.scale * target_xyz.norm());
    if (eq_residual > opts.xyz_tol) {
        throw NonConvergenceError(
            "metamer XYZ equality residual " + format_sig(eq_residual) +
                " exceeds tolerance " + format_sig(opts.xyz_tol),
            std::vector<double>(sol.weights.data(), sol.weights.data() + sol.weights.size()));
    }
    const Eigen::ArrayXd scaled_target = sol.scale * target.values;
    sol.spectral_rel_error = std::sqrt((sol.light.values - scaled_target).square().sum() /
                                       std::max(scaled_target.square().sum(), 1e-300));
    return sol;
}

// ---------------------------------------------------------------------------

namespace {

std::string level_column_name(int channel, double w) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "ch%02d_w%.4g", channel + 1, w);
    return buf;
}

} // namespace

IlluminatorModel load_characterization(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw FormatError("cannot open manifest: " + manifest_path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FormatError("manifest parse error: " + std::string(e.what()));
    }

    IlluminatorModel model;
    try {
        const int k = j.at("channels").get<int>();
        const int L = j.at("levels").get<int>();
        const auto w = j.at("intensity_levels").get<std::vector<double>>();
        if (static_cast<int>(w.size()) != L) {
            throw FormatError("manifest: intensity_levels length != levels");
        }
        model.levels_w = Eigen::Map<const Eigen::VectorXd>(w.data(), L);

        const auto csv_rel = j.at("spectra_csv").get<std::string>();
        const auto table = read_spectral_csv(manifest_path.parent_path() / csv_rel);
        const auto columns = j.at("columns");
        if (static_cast<int>(columns.size()) != k) {
            throw FormatError("manifest: columns list must have one entry per channel");
        }
        model.spd.assign(L, Eigen::MatrixXd::Zero(SpectralGrid::kBands, k));
        for (int i = 0; i < k; ++i) {
            const auto names = columns.at(i).get<std::vector<std::string>>();
            if (static_cast<int>(names.size()) != L) {
                throw FormatError("manifest: channel " + std::to_string(i + 1) +
                                  " must list one column per level");
            }
            for (int lvl = 0; lvl < L; ++lvl) {
                model.spd[lvl].col(i) = table.column(names[lvl]);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("manifest: " + std::string(e.what()));
    }
    model.validate();
    return model;
}

void write_characterization(const std::filesystem::path& out_dir, const std::string& stem,
                            const IlluminatorModel& model) {
    model.validate();
    std::filesystem::create_directories(out_dir);
    const int k = model.channels();
    const int L = model.levels();

    std::vector<std::string> names;
    Eigen::MatrixXd values(SpectralGrid::kBands, k * L);
    nlohmann::json columns = nlohmann::json::array();
    for (int i = 0; i < k; ++i) {
        nlohmann::json per_level = nlohmann::json::array();
        for (int lvl = 0; lvl < L; ++lvl) {
            const std::string name = level_column_name(i, model.levels_w[lvl]);
            per_level.push_back(name);
            values.col(static_cast<Eigen::Index>(names.size())) = model.spd[lvl].col(i);
            names.push_back(name);
        }
        columns.push_back(per_level);
    }
    const std::string csv_name = stem + "_spectra.csv";
    write_spectral_csv(out_dir / csv_name, names, values);

    nlohmann::json manifest;
    manifest["format"] = "specmatch-illuminator-v1";
    manifest["channels"] = k;
    manifest["levels"] = L;
    manifest["intensity_levels"] = to_json(model.levels_w);
    manifest["spectra_csv"] = csv_name;
    manifest["columns"] = columns;

    std::ofstream out(out_dir / (stem + ".json"));
    if (!out) throw FormatError("cannot write manifest in " + out_dir.string());
    out << manifest.dump(2) << '\n';
}

IlluminatorModel synthetic_illuminator(const SyntheticLedParams& p) {
    const int narrow = static_cast<int>(p.narrow_centers.size());
    if (p.narrow_sigmas.size() != static_cast<std::size_t>(narrow) ||
        p.narrow_powers.size() != static_cast<std::size_t>(narrow) ||
        p.narrow_shift_frac.size() != static_cast<std::size_t>(narrow)) {
        throw FormatError("synthetic illuminator: narrow channel parameter lists disagree");
    }
    if (p.levels < 2) throw FormatError("synthetic illuminator needs at least 2 levels");

    const int k = narrow + p.broad_count;
    const int L = p.levels;
    const auto& grid = SpectralGrid::standard();

    IlluminatorModel model;
    model.levels_w.resize(L);
    for (int j = 0; j < L; ++j) model.levels_w[j] = static_cast<double>(j) / (L - 1);
    model.spd.assign(L, Eigen::MatrixXd::Zero(SpectralGrid::kBands, k));

    const double w_low = model.levels_w[1];
    auto gaussian = [&grid](double center, double sigma) {
        Eigen::VectorXd g(SpectralGrid::kBands);
        for (int b = 0; b < SpectralGrid::kBands; ++b) {
            const double z = (grid.wavelength(b) - center) / sigma;
            g[b] = std::exp(-0.5 * z * z);
        }
        return g;
    };

    for (int j = 1; j < L; ++j) {
        const double drive = model.levels_w[j];
        // peak drift is largest at the lowest characterized drive and vanishes
        // at full drive
        const double drift = (1.0 - drive) / (1.0 - w_low);
        for (int i = 0; i < narrow; ++i) {
            const double center = p.narrow_centers[i] + p.shift_nm * p.narrow_shift_frac[i] * drift;
            model.spd[j].col(i) = drive * p.narrow_powers[i] * gaussian(center, p.narrow_sigmas[i]);
        }
        const double broad_center = p.broad_center + p.shift_nm * p.broad_shift_frac * drift;
        const Eigen::VectorXd broad = drive * p.broad_power * gaussian(broad_center, p.broad_sigma);
        for (int b = 0; b < p.broad_count; ++b) model.spd[j].col(narrow + b) = broad;
    }
    model.validate();
    return model;
}

double spectral_peak_nm(const Eigen::VectorXd& spd) {
    const auto& grid = SpectralGrid::standard();
    Eigen::Index peak = 0;
    spd.maxCoeff(&peak);
    const int i = static_cast<int>(peak);
    if (i == 0 || i == SpectralGrid::kBands - 1 || spd[i - 1] <= 0.0 || spd[i + 1] <= 0.0 ||
        spd[i] <= 0.0) {
        return grid.wavelength(i);
    }
    // parabola through the log values; exact for a gaussian profile
    const double y0 = std::log(spd[i - 1]);
    const double y1 = std::log(spd[i]);
    const double y2 = std::log(spd[i + 1]);
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) < 1e-300) return grid.wavelength(i);
    const double offset = 0.5 * (y0 - y2) / denom;
    return grid.wavelength(i) + std::clamp(offset, -1.0, 1.0) * grid.step_nm;
}

std::vector<ChannelDrift> characterize_drift(const IlluminatorModel& model, const CmfSet& cmf) {
    model.validate();
    std::vector<ChannelDrift> out;
    const int L = model.levels();
    for (int i = 0; i < model.channels(); ++i) {
        ChannelDrift d;
        d.channel = i;
        d.peak_full_nm = spectral_peak_nm(model.spd[L - 1].col(i));
        d.peak_low_nm = spectral_peak_nm(model.spd[1].col(i));
        d.peak_shift_nm = std::abs(d.peak_low_nm - d.peak_full_nm);
        const Tristimulus full_xyz = cmf.m.transpose() * model.spd[L - 1].col(i);
        const auto [uf, vf] = uv_prime(full_xyz);
        for (int j = 1; j < L; ++j) {
            const Tristimulus xyz = cmf.m.transpose() * model.spd[j].col(i);
            const auto [u, v] = uv_prime(xyz);
            d.uv_by_level.emplace_back(u, v);
            d.uv_drift = std::max(d.uv_drift, std::hypot(u - uf, v - vf));
        }
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace specmatch
