#include "kasar/io/cli.hpp"

#include <CLI11.hpp>
#include <iomanip>
#include <iostream>
#include <optional>

#include "kasar/core/error.hpp"
#include "kasar/io/config.hpp"
#include "kasar/io/dataset.hpp"
#include "kasar/io/metrics.hpp"
#include "kasar/io/pgm.hpp"
#include "kasar/io/report.hpp"
#include "kasar/pfa/polar_format.hpp"
#include "kasar/structure/limits.hpp"

namespace kasar::io {

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;

    Config load() const {
        Config c = config.empty() ? default_config() : load_config(config);
        if (seed) c.seed = *seed;
        return c;
    }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON config file (defaults to the canonical scenario)");
    sub->add_option("--seed", c.seed, "Override the config seed");
}

int cmd_simulate(const Common& common, const std::string& out_path, std::ostream& out) {
    const Config cfg = common.load();
    const auto geo = build_geometry(cfg);
    const auto err = build_error(cfg, geo.slow_time);
    auto ph = sim::synth_phase_history(build_scene(cfg.scene), geo, cfg.radar, err);
    if (cfg.noise_snr_db) sim::add_complex_noise(ph.data, *cfg.noise_snr_db, cfg.seed + 1);
    save_phase_history(out_path, ph, {config_hash(cfg)});
    out << nlohmann::json{{"output", out_path}, {"pulses", ph.data.rows()}, {"range_samples", ph.data.cols()},
                          {"config_hash", config_hash(cfg)}}
               .dump(2)
        << '\n';
    return 0;
}

int cmd_pfa(const Common& common, const std::string& in, const std::string& out_spec, const std::string& out_img,
            std::ostream& out) {
    const Config cfg = common.load();
    const auto ph = load_phase_history(in);
    const auto spec = pfa::polar_format(ph, cfg.pfa);
    const Provenance prov{config_hash(cfg)};
    save_spectrum(out_spec, spec, prov);
    nlohmann::json j{{"spectrum", out_spec},
                     {"rows", spec.data.rows()},
                     {"cols", spec.data.cols()},
                     {"y0", spec.grid.y0},
                     {"pixel_x", spec.grid.pixel_x()},
                     {"pixel_y", spec.grid.pixel_y()},
                     {"uncovered_cells", spec.coverage.size() - count_valid(spec.coverage)}};
    if (!out_img.empty()) {
        save_image(out_img, pfa::form_image(spec, cfg.taper), prov);
        j["image"] = out_img;
    }
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_autofocus(const Common& common, const std::string& in, const std::string& mode, const std::string& out_img,
                  const std::string& report_path, const std::string& out_spec, std::ostream& out) {
    Config cfg = common.load();
    if (!mode.empty()) cfg.autofocus.mode = pipeline::mode_from_string(mode);
    const auto spec = load_spectrum(in);
    const auto res = pipeline::run_autofocus(spec, cfg.autofocus);
    const Provenance prov{config_hash(cfg)};
    save_image(out_img, res.image, prov);
    if (!out_spec.empty()) save_spectrum(out_spec, res.spectrum, prov);
    const nlohmann::json rep = to_json(res.report);
    if (!report_path.empty()) write_atomic(report_path, rep.dump(2) + "\n");
    nlohmann::json brief = rep;
    for (auto& s : brief["stages"]) s.erase("profile");
    out << brief.dump(2) << '\n';
    return 0;
}

int cmd_limits(double res, double res_y, double coeff, double fc, double sin_ref, bool as_json, std::ostream& out) {
    const double y0 = reference_y0(fc, sin_ref);
    const double ry = res_y > 0.0 ? res_y : res;
    const auto lim = structure::necessity_limits(res, ry, y0);
    const auto region = lim.classify(coeff);
    if (as_json) {
        nlohmann::json j = to_json(lim);
        j["coeff"] = coeff;
        j["region"] = structure::to_string(region);
        out << j.dump(2) << '\n';
        return 0;
    }
    out << std::setprecision(6);
    out << "rho_x " << res << " m, rho_y " << ry << " m, Y0 " << y0 << " rad/m\n";
    out << "a_ape     " << lim.a_ape << "  (azimuth defocus)\n";
    out << "a_rcm     " << lim.a_rcm << "  (half-cell migration)\n";
    out << "a_defocus " << lim.a_defocus << "  (range defocus)\n";
    out << "coeff " << coeff << " -> region " << structure::to_string(region) << "\n\n";
    out << region_table(y0, {0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 1.0}, {1e-4, 1e-3, 1e-2, 1e-1, 1.0});
    return 0;
}

int cmd_metrics(const Common& common, const std::string& in, const std::string& json_path, const std::string& pgm,
                std::optional<double> dyn, std::optional<std::size_t> targets, bool rcm, std::ostream& out) {
    const Config cfg = common.load();
    const auto img = load_image(in);
    FocusMetrics fm = focus_metrics(img, targets.value_or(cfg.metrics_targets));
    if (rcm) fm.residual_rcm_cells = pipeline::residual_rcm_cells(pfa::unform_image(img), cfg.autofocus.estimators.rcm);
    if (!pgm.empty()) export_magnitude(img.data, pgm, dyn.value_or(cfg.export_dynamic_range_db));
    const nlohmann::json j = to_json(fm);
    if (!json_path.empty()) write_atomic(json_path, j.dump(2) + "\n");
    out << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spotlight SAR polar-format imaging and knowledge-aided 2-D autofocus", "kasar"};
    app.require_subcommand(1);

    Common c_sim, c_pfa, c_af, c_met;
    std::string sim_out, pfa_in, pfa_spec, pfa_img, af_in, af_mode, af_out, af_report, af_spec, met_in, met_json,
        met_pgm;
    double lim_res = 0.0, lim_res_y = 0.0, lim_coeff = 0.0, lim_fc = 10e9, lim_sin = 1.0;
    bool lim_json = false, met_rcm = false;
    std::optional<double> met_dyn;
    std::optional<std::size_t> met_targets;

    auto* sim = app.add_subcommand("simulate", "Scene, geometry and range error -> phase history");
    add_common(sim, c_sim);
    sim->add_option("--out,-o", sim_out, "Output phase-history dataset")->required();

    auto* pf = app.add_subcommand("pfa", "Phase history -> Cartesian spectrum (and image)");
    add_common(pf, c_pfa);
    pf->add_option("--in,-i", pfa_in, "Phase-history dataset")->required();
    pf->add_option("--out,-o", pfa_spec, "Output spectrum dataset")->required();
    pf->add_option("--image", pfa_img, "Also write the formed image");

    auto* af = app.add_subcommand("autofocus", "Spectrum -> refocused image and report");
    add_common(af, c_af);
    af->add_option("--in,-i", af_in, "Spectrum dataset")->required();
    af->add_option("--mode", af_mode, "ka | 1d | prior2d (default from config)")
        ->check(CLI::IsMember({"ka", "1d", "prior2d"}));
    af->add_option("--out,-o", af_out, "Output image dataset")->required();
    af->add_option("--report", af_report, "Write the full report (JSON)");
    af->add_option("--out-spectrum", af_spec, "Also write the compensated spectrum");

    auto* lim = app.add_subcommand("limits", "Autofocus necessity limits and region table");
    lim->add_option("--res", lim_res, "Resolution rho (m); used for both dimensions unless --res-y")
        ->required()
        ->check(CLI::PositiveNumber);
    lim->add_option("--res-y", lim_res_y, "Range resolution (m)")->check(CLI::PositiveNumber);
    lim->add_option("--coeff", lim_coeff, "Quadratic coefficient a of phi0 = a X^2")->required();
    lim->add_option("--fc", lim_fc, "Center frequency (Hz)")->check(CLI::PositiveNumber);
    lim->add_option("--sin-ref", lim_sin, "sin of the reference incident angle")->check(CLI::Range(1e-6, 1.0));
    lim->add_flag("--json", lim_json, "Print JSON instead of text");

    auto* met = app.add_subcommand("metrics", "Image -> focus metrics");
    add_common(met, c_met);
    met->add_option("--in,-i", met_in, "Image dataset")->required();
    met->add_option("--json", met_json, "Also write the metrics to a file");
    met->add_option("--pgm", met_pgm, "Export the magnitude as a 16-bit graymap");
    met->add_option("--dynamic-range", met_dyn, "Graymap dynamic range (dB)")->check(CLI::PositiveNumber);
    met->add_option("--targets", met_targets, "Number of point targets to analyze");
    met->add_flag("--residual-rcm", met_rcm, "Also measure residual range migration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << "run 'kasar --help' for usage\n";
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(c_sim, sim_out, out);
        if (pf->parsed()) return cmd_pfa(c_pfa, pfa_in, pfa_spec, pfa_img, out);
        if (af->parsed()) return cmd_autofocus(c_af, af_in, af_mode, af_out, af_report, af_spec, out);
        if (lim->parsed()) return cmd_limits(lim_res, lim_res_y, lim_coeff, lim_fc, lim_sin, lim_json, out);
        if (met->parsed()) return cmd_metrics(c_met, met_in, met_json, met_pgm, met_dyn, met_targets, met_rcm, out);
    } catch (const KindMismatch& e) {
        err << "kind mismatch: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        err << "invalid input: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace kasar::io
