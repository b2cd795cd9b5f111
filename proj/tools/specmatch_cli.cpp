// Command-line front end: characterize an illuminator, solve metamers and
// matched illuminations, run the color-measurement evaluation, and fit
// reflectance combinations. Every command writes its outputs plus a resolved
// config.json into the --out directory; all numbers are serialized at 12
// significant digits so repeated runs are byte-identical.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specmatch/correction.hpp"
#include "specmatch/csv.hpp"
#include "specmatch/datasets.hpp"
#include "specmatch/illuminator.hpp"
#include "specmatch/jsonio.hpp"
#include "specmatch/matcher.hpp"
#include "specmatch/synthfit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace specmatch;

namespace {

struct CommonArgs {
    std::string out_dir = "out";
    std::string grid = "400:10:700";
    std::string mode = "both";
    double tol = 1e-8;
    int max_iters = 200;
    std::uint64_t seed = 0;
    std::string cmf_csv;
    std::string config_file;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_file, "JSON config file; flags override it");
    cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--grid", args.grid, "spectral grid (fixed)")->capture_default_str();
    cmd->add_option("--mode", args.mode, "simple|complex|both")->capture_default_str();
    cmd->add_option("--tol", args.tol, "solver tolerance")->capture_default_str();
    cmd->add_option("--max-iters", args.max_iters, "solver iteration cap")
        ->capture_default_str();
    cmd->add_option("--seed", args.seed, "seed for synthetic generators")
        ->capture_default_str();
    cmd->add_option("--cmf", args.cmf_csv, "override the observer table (spectral CSV)");
}

void apply_config_file(const CLI::App& cmd, CommonArgs& args) {
    if (args.config_file.empty()) return;
    std::ifstream in(args.config_file);
    if (!in) throw FormatError("cannot open config file: " + args.config_file);
    json cfg;
    in >> cfg;
    auto take = [&](const char* key, auto& slot) {
        using T = std::decay_t<decltype(slot)>;
        if (cfg.contains(key) && cmd.count(std::string("--") + key) == 0) {
            slot = cfg.at(key).get<T>();
        }
    };
    take("out", args.out_dir);
    take("mode", args.mode);
    take("tol", args.tol);
    take("max-iters", args.max_iters);
    take("seed", args.seed);
    take("cmf", args.cmf_csv);
    take("grid", args.grid);
}

void validate_grid(const std::string& spec) {
    int start = 0, step = 0, end = 0;
    if (std::sscanf(spec.c_str(), "%d:%d:%d", &start, &step, &end) != 3) {
        throw FormatError("grid must look like 400:10:700");
    }
    SpectralGrid{start, end, step}.validate();
}

CmfSet load_cmf_arg(const CommonArgs& args) {
    return args.cmf_csv.empty() ? data::load_cmf() : data::load_cmf(args.cmf_csv);
}

/// Illuminant by name (D65, A, D65_anchor; case-insensitive) or by
/// "file.csv" / "file.csv:column".
Spectrum load_target(const std::string& spec) {
    std::string lower = spec;
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    if (lower == "d65") return data::load_illuminant("D65");
    if (lower == "a") return data::load_illuminant("A");
    if (lower == "d65_anchor") return data::load_illuminant("D65_anchor");

    std::string path = spec, column;
    if (const auto colon = spec.rfind(':');
        colon != std::string::npos && spec.substr(colon - 4, 4) == ".csv") {
        path = spec.substr(0, colon);
        column = spec.substr(colon + 1);
    }
    const auto table = read_spectral_csv(path);
    const int idx = column.empty() ? 0 : table.find(column);
    if (idx < 0) throw FormatError("no column '" + column + "' in " + path);
    return table.spectrum(idx, SpectrumKind::illuminant);
}

json stats_to_json(const DeltaEStats& s) {
    return json{{"mean", round_sig(s.mean)}, {"median", round_sig(s.median)},
                {"p95", round_sig(s.p95)},   {"p99", round_sig(s.p99)},
                {"max", round_sig(s.max)},   {"n", s.n}};
}

json match_to_json(const MatchResult& r) {
    json j;
    j["weights"] = to_json(r.weights);
    j["M"] = to_json_row_major(r.correction);
    j["objective"] = round_sig(r.objective);
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["trace"] = to_json(r.trace);
    return j;
}

json metamer_to_json(const MetamerSolution& sol) {
    json j;
    j["weights"] = to_json(sol.weights);
    j["scale"] = round_sig(sol.scale);
    j["xyz"] = to_json(Eigen::VectorXd(sol.xyz));
    j["xyz_relative"] = to_json(Eigen::VectorXd(sol.xyz / sol.xyz[1]));
    j["spectral_rel_error"] = round_sig(sol.spectral_rel_error);
    j["iterations"] = sol.iterations;
    return j;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_config(const fs::path& out_dir, const json& resolved) {
    fs::create_directories(out_dir);
    write_json(out_dir / "config.json", resolved);
}

Illuminator load_illuminator(const std::string& manifest) {
    return Illuminator{load_characterization(manifest)};
}

SensorSet load_camera_arg(const std::string& camera_csv) {
    return camera_csv.empty() ? data::load_camera() : data::load_camera(camera_csv);
}

// ---------------------------------------------------------------- characterize

int cmd_characterize(const CommonArgs& args, bool synthetic, double shift_nm, int levels,
                     const std::string& measured, json resolved) {
    validate_grid(args.grid);
    const CmfSet cmf = load_cmf_arg(args);
    const fs::path out_dir(args.out_dir);

    IlluminatorModel model;
    if (synthetic) {
        SyntheticLedParams params;
        params.shift_nm = shift_nm;
        params.levels = levels;
        model = synthetic_illuminator(params);
    } else {
        if (measured.empty()) {
            throw FormatError("characterize needs --synthetic or --measured <manifest>");
        }
        model = load_characterization(measured); // validates; lists violations
    }

    write_config(out_dir, resolved);
    write_characterization(out_dir, "illuminator", model);

    const auto drift = characterize_drift(model, cmf);
    double max_shift = 0.0;
    std::printf("channel  peak_full_nm  peak_low_nm  shift_nm  uv_drift\n");
    for (const auto& d : drift) {
        std::printf("%7d  %12.2f  %11.2f  %8.2f  %8.5f\n", d.channel + 1, d.peak_full_nm,
                    d.peak_low_nm, d.peak_shift_nm, d.uv_drift);
        max_shift = std::max(max_shift, d.peak_shift_nm);
    }
    std::printf("max peak shift: %.1f nm\n", max_shift);

    // u'v' per level (the chromaticity-walk table)
    std::ofstream uv(out_dir / "uv_drift.csv");
    uv << "channel,level_w,u_prime,v_prime\n";
    for (const auto& d : drift) {
        for (std::size_t j = 0; j < d.uv_by_level.size(); ++j) {
            uv << d.channel + 1 << ',' << format_sig(model.levels_w[static_cast<int>(j) + 1])
               << ',' << format_sig(d.uv_by_level[j].first) << ','
               << format_sig(d.uv_by_level[j].second) << '\n';
        }
    }

    json report;
    report["channels"] = model.channels();
    report["levels"] = model.levels();
    report["max_peak_shift_nm"] = round_sig(max_shift);
    write_json(out_dir / "characterize_report.json", report);
    return 0;
}

// ---------------------------------------------------------------- metamer

int cmd_metamer(const CommonArgs& args, const std::string& manifest,
                const std::string& target_spec, json resolved) {
    validate_grid(args.grid);
    const CmfSet cmf = load_cmf_arg(args);
    const Illuminator illum = load_illuminator(manifest);
    const Spectrum target = load_target(target_spec);
    const fs::path out_dir(args.out_dir);
    write_config(out_dir, resolved);

    const std::vector<std::string> modes =
        args.mode == "both" ? std::vector<std::string>{"simple", "complex"}
                            : std::vector<std::string>{args.mode};

    json out;
    std::vector<std::string> spd_names{"target"};
    Eigen::MatrixXd spd_cols(SpectralGrid::kBands, 1 + modes.size());
    spd_cols.col(0) = target.values.matrix();

    MetamerOptions metamer_opts;
    metamer_opts.max_iterations = std::max(args.max_iters, metamer_opts.max_iterations);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const MetamerSolution sol =
            solve_metamer(illum, target, cmf, parse_mode(modes[i]), metamer_opts);
        out[modes[i]] = metamer_to_json(sol);
        spd_names.push_back("metamer_" + modes[i]);
        spd_cols.col(static_cast<Eigen::Index>(i) + 1) = sol.light.values.matrix();

        const Tristimulus target_xyz = cmf.m.transpose() * target.values.matrix();
        const double residual =
            (sol.xyz - sol.scale * target_xyz).norm() / (sol.scale * target_xyz.norm());
        std::printf("%s metamer: xyz residual %.3g, spectral rel error %.4f, %d iterations\n",
                    modes[i].c_str(), residual, sol.spectral_rel_error, sol.iterations);
    }

    write_json(out_dir / "metamer.json", out);
    write_spectral_csv(out_dir / "metamer_spd.csv", spd_names, spd_cols);
    return 0;
}

// ---------------------------------------------------------------- match

struct MatchOutputs {
    MetamerSolution metamer;
    std::optional<MatchResult> simple;
    std::optional<MatchResult> complex_r;
};

MatchOutputs run_match(const CommonArgs& args, const Illuminator& illum,
                       const SensorSet& camera, const CmfSet& cmf,
                       const Spectrum& target_spd, bool raw_target) {
    MatchOutputs out;

    Spectrum e_measure = target_spd;
    if (!raw_target) {
        // measurement light = the metamer the device can actually produce,
        // rendered with the physically true (complex) model
        out.metamer = solve_metamer(illum, target_spd, cmf, IlluminatorMode::complex);
        e_measure = out.metamer.light;
    } else {
        out.metamer.light = target_spd;
        out.metamer.weights = Eigen::VectorXd::Zero(illum.channels());
    }

    MatchProblem p;
    p.e_target = e_measure;
    p.camera = camera;
    p.cmf = cmf;
    p.illum = &illum;
    p.tol = args.tol;
    p.max_iters = args.max_iters;
    if (!raw_target) p.c_guess = out.metamer.weights;

    if (args.mode == "simple" || args.mode == "both") {
        p.mode = IlluminatorMode::simple;
        out.simple = match_best(p);
    }
    if (args.mode == "complex" || args.mode == "both") {
        p.mode = IlluminatorMode::complex;
        out.complex_r = match_best(p);
    }
    return out;
}

int cmd_match(const CommonArgs& args, const std::string& manifest,
              const std::string& camera_csv, const std::string& target_spec,
              bool raw_target, json resolved) {
    validate_grid(args.grid);
    const CmfSet cmf = load_cmf_arg(args);
    const Illuminator illum = load_illuminator(manifest);
    const SensorSet camera = load_camera_arg(camera_csv);
    const Spectrum target = load_target(target_spec);
    const fs::path out_dir(args.out_dir);
    write_config(out_dir, resolved);

    const MatchOutputs out = run_match(args, illum, camera, cmf, target, raw_target);

    json j;
    if (!raw_target) j["metamer"] = metamer_to_json(out.metamer);
    std::vector<std::string> names{"measurement_light"};
    std::vector<Eigen::VectorXd> cols{out.metamer.light.values.matrix()};

    auto add_result = [&](const char* name, const MatchResult& r, IlluminatorMode mode) {
        j[name] = match_to_json(r);
        names.push_back(std::string("matched_") + name);
        cols.push_back(illum.render(r.weights, mode).values.matrix());
        if (mode == IlluminatorMode::complex) {
            // second reading of the same weights: final substituted basis
            names.push_back("matched_complex_basis");
            cols.push_back(r.basis_final * r.weights);
        }
        std::printf("%s: objective %.6g after %d iterations%s\n", name, r.objective,
                    r.iterations, r.converged ? "" : " (iteration cap)");
    };
    if (out.simple) add_result("simple", *out.simple, IlluminatorMode::simple);
    if (out.complex_r) add_result("complex", *out.complex_r, IlluminatorMode::complex);

    Eigen::MatrixXd spd(SpectralGrid::kBands, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        spd.col(static_cast<Eigen::Index>(i)) = cols[i];
    }
    write_json(out_dir / "match.json", j);
    write_spectral_csv(out_dir / "matched_spd.csv", names, spd);
    return 0;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const CommonArgs& args, const std::string& manifest,
                 const std::string& camera_csv, const std::string& target_spec,
                 const std::vector<std::string>& reflectance_specs,
                 const std::string& rgbs_csv, json resolved) {
    validate_grid(args.grid);
    const CmfSet cmf = load_cmf_arg(args);
    const Illuminator illum = load_illuminator(manifest);
    const SensorSet camera = load_camera_arg(camera_csv);
    const Spectrum target = load_target(target_spec);
    const fs::path out_dir(args.out_dir);
    write_config(out_dir, resolved);

    CommonArgs match_args = args;
    match_args.mode = "both";
    const MatchOutputs solved = run_match(match_args, illum, camera, cmf, target, false);
    const Spectrum& e_measure = solved.metamer.light;

    struct Condition {
        std::string name;
        Spectrum light;
    };
    std::vector<Condition> conditions{{"metamer", e_measure}};
    conditions.push_back(
        {"simple_matched", illum.render(solved.simple->weights, IlluminatorMode::complex)});
    conditions.push_back(
        {"complex_matched", illum.render(solved.complex_r->weights, IlluminatorMode::complex)});

    json summary;
    summary["match"] = {{"simple", match_to_json(*solved.simple)},
                        {"complex", match_to_json(*solved.complex_r)}};
    summary["metamer"] = metamer_to_json(solved.metamer);

    std::ofstream per_sample(out_dir / "delta_e.csv");
    per_sample << "set,condition,sample,delta_e\n";
    std::ofstream table(out_dir / "report.csv");
    table << "set,condition,mean,median,p95,p99,max,n\n";

    for (const auto& spec : reflectance_specs) {
        std::string name = spec, path = spec;
        if (const auto eq = spec.find('='); eq != std::string::npos) {
            name = spec.substr(0, eq);
            path = spec.substr(eq + 1);
        } else {
            name = fs::path(spec).stem().string();
        }
        const SpectralTable refl_table = read_spectral_csv(path);
        const auto reflectances = data::to_reflectances(refl_table);

        for (const auto& cond : conditions) {
            EvaluationReport report;
            if (!rgbs_csv.empty() && cond.name == "metamer") {
                // measured or synthesized RGBs replace the synthetic camera
                // responses; ground truth stays spectral
                std::ifstream rin(rgbs_csv);
                if (!rin) throw FormatError("cannot open " + rgbs_csv);
                std::string line;
                std::getline(rin, line);
                std::vector<ColorSample> samples;
                std::size_t idx = 0;
                while (std::getline(rin, line) && idx < reflectances.size()) {
                    double r, g, b;
                    char id[128];
                    if (std::sscanf(line.c_str(), "%127[^,],%lf,%lf,%lf", id, &r, &g, &b) != 4) {
                        throw FormatError("bad rgb row: " + line);
                    }
                    samples.push_back({Tristimulus(r, g, b),
                                       xyz_of(e_measure, reflectances[idx], cmf), id});
                    ++idx;
                }
                report = evaluate_samples(samples, white_of(e_measure, cmf));
            } else {
                report = evaluate(camera, e_measure, cond.light, reflectances, cmf);
            }
            summary["delta_e"][name][cond.name] = stats_to_json(report.stats);
            const auto& s = report.stats;
            table << name << ',' << cond.name << ',' << format_sig(s.mean) << ','
                  << format_sig(s.median) << ',' << format_sig(s.p95) << ','
                  << format_sig(s.p99) << ',' << format_sig(s.max) << ',' << s.n << '\n';
            for (std::size_t i = 0; i < report.delta_e.size(); ++i) {
                per_sample << name << ',' << cond.name << ','
                           << (i < refl_table.names.size() ? refl_table.names[i]
                                                           : std::to_string(i))
                           << ',' << format_sig(report.delta_e[i]) << '\n';
            }
            std::printf("%s / %-16s mean %7.4f median %7.4f max %8.4f\n", name.c_str(),
                        cond.name.c_str(), s.mean, s.median, s.max);
        }
    }
    write_json(out_dir / "report.json", summary);
    return 0;
}

// ---------------------------------------------------------------- synth

int cmd_synth(const CommonArgs& args, const std::string& targets_csv,
              const std::string& chart_csv, const std::string& rgbs_csv, json resolved) {
    validate_grid(args.grid);
    const fs::path out_dir(args.out_dir);
    write_config(out_dir, resolved);

    const SpectralTable targets = read_spectral_csv(targets_csv);
    const auto chart =
        data::to_reflectances(chart_csv.empty() ? data::load_chart()
                                                : data::load_chart(chart_csv));
    const auto pool_idx = candidate_pool(chart);
    std::vector<Spectrum> pool;
    for (int idx : pool_idx) pool.push_back(chart[static_cast<std::size_t>(idx)]);

    std::vector<Tristimulus> measured;
    if (!rgbs_csv.empty()) {
        std::ifstream rin(rgbs_csv);
        if (!rin) throw FormatError("cannot open " + rgbs_csv);
        std::string line;
        std::getline(rin, line);
        std::vector<Tristimulus> chart_rgbs;
        while (std::getline(rin, line)) {
            double r, g, b;
            char id[128];
            if (std::sscanf(line.c_str(), "%127[^,],%lf,%lf,%lf", id, &r, &g, &b) != 4) {
                throw FormatError("bad rgb row: " + line);
            }
            chart_rgbs.emplace_back(r, g, b);
        }
        if (chart_rgbs.size() != chart.size()) {
            throw FormatError("rgb list must cover the 24 chart patches");
        }
        for (int idx : pool_idx) measured.push_back(chart_rgbs[static_cast<std::size_t>(idx)]);
    }

    std::ofstream fits(out_dir / "fits.csv");
    fits << "target_id,idx1,idx2,idx3,idx4,c1,c2,c3,c4,rel_error\n";
    std::ofstream rgbs_out;
    if (!measured.empty()) {
        rgbs_out.open(out_dir / "synth_rgb.csv");
        rgbs_out << "id,R,G,B\n";
    }

    double max_err = 0.0;
    std::vector<double> errors;
    for (std::size_t t = 0; t < targets.names.size(); ++t) {
        const CombinationFit fit =
            fit_combination(targets.spectrum(static_cast<int>(t)), pool);
        errors.push_back(fit.rel_error);
        max_err = std::max(max_err, fit.rel_error);
        fits << targets.names[t];
        for (int r = 0; r < 4; ++r) fits << ',' << fit.indices[static_cast<std::size_t>(r)];
        for (int r = 0; r < 4; ++r) fits << ',' << format_sig(fit.coeffs[r]);
        fits << ',' << format_sig(fit.rel_error) << '\n';
        if (!measured.empty()) {
            const Tristimulus rgb = synth_rgb(fit, measured);
            rgbs_out << targets.names[t] << ',' << format_sig(rgb[0]) << ','
                     << format_sig(rgb[1]) << ',' << format_sig(rgb[2]) << '\n';
        }
    }
    const DeltaEStats err_stats = summarize(errors);
    std::printf("fits: %zu targets, median rel error %.2f%%, max %.2f%%\n",
                targets.names.size(), 100.0 * err_stats.median, 100.0 * err_stats.max);

    json report;
    report["n_targets"] = targets.names.size();
    report["median_rel_error"] = round_sig(err_stats.median);
    report["p95_rel_error"] = round_sig(err_stats.p95);
    report["max_rel_error"] = round_sig(err_stats.max);
    write_json(out_dir / "synth_report.json", report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectrally tunable illumination matching for colorimetric cameras"};
    app.require_subcommand(1);

    // characterize
    CommonArgs ch_args;
    bool ch_synth = false;
    double ch_shift = 17.0;
    int ch_levels = 11;
    std::string ch_measured;
    auto* ch = app.add_subcommand("characterize",
                                  "generate or validate an illuminator characterization");
    add_common(ch, ch_args);
    ch->add_flag("--synthetic", ch_synth, "generate the synthetic characterization");
    ch->add_option("--shift", ch_shift, "max peak shift of the synthetic device (nm)")
        ->capture_default_str();
    ch->add_option("--levels", ch_levels, "intensity levels of the synthetic device")
        ->capture_default_str();
    ch->add_option("--measured", ch_measured, "manifest of measured data to validate");

    // metamer
    CommonArgs me_args;
    std::string me_manifest, me_target = "d65";
    auto* me = app.add_subcommand("metamer", "solve channel weights metameric to a target");
    add_common(me, me_args);
    me->add_option("--manifest", me_manifest, "illuminator manifest JSON")->required();
    me->add_option("--target", me_target, "illuminant name or CSV[:column]")
        ->capture_default_str();

    // match
    CommonArgs ma_args;
    std::string ma_manifest, ma_camera, ma_target = "d65";
    bool ma_raw = false;
    auto* ma = app.add_subcommand("match", "solve the matched illumination for a camera");
    add_common(ma, ma_args);
    ma->add_option("--manifest", ma_manifest, "illuminator manifest JSON")->required();
    ma->add_option("--camera", ma_camera, "camera sensitivity CSV (default: bundled DSLR)");
    ma->add_option("--target", ma_target, "measurement illuminant name or CSV[:column]")
        ->capture_default_str();
    ma->add_flag("--raw-target", ma_raw,
                 "use the target SPD directly instead of its device metamer");

    // evaluate
    CommonArgs ev_args;
    std::string ev_manifest, ev_camera, ev_target = "d65", ev_rgbs;
    std::vector<std::string> ev_refl;
    auto* ev = app.add_subcommand("evaluate",
                                  "full delta-E report for metamer and matched lights");
    add_common(ev, ev_args);
    ev->add_option("--manifest", ev_manifest, "illuminator manifest JSON")->required();
    ev->add_option("--camera", ev_camera, "camera sensitivity CSV (default: bundled DSLR)");
    ev->add_option("--target", ev_target, "measurement illuminant name or CSV[:column]")
        ->capture_default_str();
    ev->add_option("--reflectances", ev_refl, "reflectance sets, [name=]file.csv")
        ->required()
        ->expected(-1);
    ev->add_option("--rgbs", ev_rgbs, "measured/synthesized RGB CSV for the metamer row");

    // synth
    CommonArgs sy_args;
    std::string sy_targets, sy_chart, sy_rgbs;
    auto* sy = app.add_subcommand("synth",
                                  "fit targets as 4-patch combinations of the chart");
    add_common(sy, sy_args);
    sy->add_option("--targets", sy_targets, "target reflectance CSV")->required();
    sy->add_option("--chart", sy_chart, "24-patch chart CSV (default: bundled chart)");
    sy->add_option("--rgbs", sy_rgbs, "measured chart RGB CSV (id,R,G,B; 24 rows)");

    CLI11_PARSE(app, argc, argv);

    try {
        auto resolved = [&](const CLI::App* cmd, const CommonArgs& args) {
            json j;
            j["command"] = cmd->get_name();
            j["out"] = args.out_dir;
            j["grid"] = args.grid;
            j["mode"] = args.mode;
            j["tol"] = args.tol;
            j["max-iters"] = args.max_iters;
            j["seed"] = args.seed;
            if (!args.cmf_csv.empty()) j["cmf"] = args.cmf_csv;
            if (!args.config_file.empty()) j["config"] = args.config_file;
            return j;
        };

        if (ch->parsed()) {
            apply_config_file(*ch, ch_args);
            json r = resolved(ch, ch_args);
            r["synthetic"] = ch_synth;
            r["shift"] = ch_shift;
            r["levels"] = ch_levels;
            if (!ch_measured.empty()) r["measured"] = ch_measured;
            return cmd_characterize(ch_args, ch_synth, ch_shift, ch_levels, ch_measured, r);
        }
        if (me->parsed()) {
            apply_config_file(*me, me_args);
            json r = resolved(me, me_args);
            r["manifest"] = me_manifest;
            r["target"] = me_target;
            return cmd_metamer(me_args, me_manifest, me_target, r);
        }
        if (ma->parsed()) {
            apply_config_file(*ma, ma_args);
            json r = resolved(ma, ma_args);
            r["manifest"] = ma_manifest;
            r["target"] = ma_target;
            r["raw-target"] = ma_raw;
            if (!ma_camera.empty()) r["camera"] = ma_camera;
            return cmd_match(ma_args, ma_manifest, ma_camera, ma_target, ma_raw, r);
        }
        if (ev->parsed()) {
            apply_config_file(*ev, ev_args);
            json r = resolved(ev, ev_args);
            r["manifest"] = ev_manifest;
            r["target"] = ev_target;
            r["reflectances"] = ev_refl;
            if (!ev_camera.empty()) r["camera"] = ev_camera;
            if (!ev_rgbs.empty()) r["rgbs"] = ev_rgbs;
            return cmd_evaluate(ev_args, ev_manifest, ev_camera, ev_target, ev_refl,
                                ev_rgbs, r);
        }
        if (sy->parsed()) {
            apply_config_file(*sy, sy_args);
            json r = resolved(sy, sy_args);
            r["targets"] = sy_targets;
            if (!sy_chart.empty()) r["chart"] = sy_chart;
            if (!sy_rgbs.empty()) r["rgbs"] = sy_rgbs;
            return cmd_synth(sy_args, sy_targets, sy_chart, sy_rgbs, r);
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
