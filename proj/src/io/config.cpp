#include "kasar/io/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "kasar/core/error.hpp"
#include "kasar/io/dataset.hpp"

namespace kasar::io {

using nlohmann::json;

Config default_config() {
    Config c;
    c.autofocus.estimators.rcm.smoothing_degree = 24;
    return c;
}

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw FormatError(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw FormatError("unknown key '" + k + "' in " + where);
}

template <typename T>
void get_to(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Config parse_config(const json& j) {
    Config c = default_config();
    try {
        only_keys(j, {"radar", "geometry", "scene", "error", "noise_snr_db", "seed", "pfa", "autofocus", "metrics"},
                  "config");
        if (j.contains("radar")) {
            const json& r = j.at("radar");
            only_keys(r, {"center_frequency", "bandwidth", "range_freq_samples", "pulse_count", "c"}, "radar");
            get_to(r, "center_frequency", c.radar.center_frequency);
            get_to(r, "bandwidth", c.radar.bandwidth);
            get_to(r, "range_freq_samples", c.radar.range_freq_samples);
            get_to(r, "pulse_count", c.radar.pulse_count);
            get_to(r, "c", c.radar.c);
        }
        if (j.contains("geometry")) {
            const json& g = j.at("geometry");
            only_keys(g, {"velocity", "altitude", "slant_range", "squint_deg", "aperture_length"}, "geometry");
            get_to(g, "velocity", c.geometry.velocity);
            get_to(g, "altitude", c.geometry.altitude);
            get_to(g, "slant_range", c.geometry.slant_range);
            get_to(g, "squint_deg", c.geometry.squint_deg);
            get_to(g, "aperture_length", c.geometry.aperture_length);
        }
        if (j.contains("scene")) {
            const json& s = j.at("scene");
            only_keys(s, {"targets", "per_side", "spacing", "rotation_deg", "offset", "amplitudes"}, "scene");
            if (s.contains("targets")) {
                c.scene.targets.clear();
                for (const json& t : s.at("targets")) {
                    only_keys(t, {"x", "y", "amplitude", "phase"}, "scene.targets[]");
                    const double a = t.value("amplitude", 1.0), ph = t.value("phase", 0.0);
                    c.scene.targets.push_back({t.at("x").get<double>(), t.at("y").get<double>(), std::polar(a, ph)});
                }
            }
            get_to(s, "per_side", c.scene.per_side);
            get_to(s, "spacing", c.scene.spacing);
            get_to(s, "rotation_deg", c.scene.rotation_deg);
            if (s.contains("offset")) {
                const json& o = s.at("offset");
                if (!o.is_array() || o.size() != 2) throw FormatError("scene.offset must be [x, y]");
                c.scene.offset_x = o.at(0).get<double>();
                c.scene.offset_y = o.at(1).get<double>();
            }
            get_to(s, "amplitudes", c.scene.amplitudes);
        }
        if (j.contains("error")) {
            const json& e = j.at("error");
            only_keys(e, {"kind", "kappa2", "amplitude", "cycles", "phase", "step_std", "table"}, "error");
            get_to(e, "kind", c.error.kind);
            get_to(e, "kappa2", c.error.params.kappa2);
            get_to(e, "amplitude", c.error.params.amplitude);
            get_to(e, "cycles", c.error.params.cycles);
            get_to(e, "phase", c.error.params.phase);
            get_to(e, "step_std", c.error.params.step_std);
            get_to(e, "table", c.error.params.table);
            if (c.error.kind != "none") sim::error_kind_from_string(c.error.kind);
        }
        if (j.contains("noise_snr_db") && !j.at("noise_snr_db").is_null())
            c.noise_snr_db = j.at("noise_snr_db").get<double>();
        get_to(j, "seed", c.seed);
        if (j.contains("pfa")) {
            const json& p = j.at("pfa");
            only_keys(p, {"rows", "cols", "guard", "taps", "oversample", "kaiser_beta", "taper"}, "pfa");
            get_to(p, "rows", c.pfa.grid.rows);
            get_to(p, "cols", c.pfa.grid.cols);
            get_to(p, "guard", c.pfa.grid.guard);
            get_to(p, "taps", c.pfa.interp.taps);
            get_to(p, "oversample", c.pfa.interp.oversample);
            get_to(p, "kaiser_beta", c.pfa.interp.kaiser_beta);
            if (p.contains("taper")) c.taper = pfa::taper_from_string(p.at("taper").get<std::string>());
        }
        if (j.contains("autofocus")) {
            const json& a = j.at("autofocus");
            only_keys(a,
                      {"mode", "coarse_rcm_stage", "fine_ape_stage", "outer_iterations", "coarse_factor", "zero_invalid",
                       "skip_negligible", "pga", "rcm"},
                      "autofocus");
            auto& af = c.autofocus;
            if (a.contains("mode")) af.mode = pipeline::mode_from_string(a.at("mode").get<std::string>());
            get_to(a, "coarse_rcm_stage", af.coarse_rcm_stage);
            get_to(a, "fine_ape_stage", af.fine_ape_stage);
            get_to(a, "outer_iterations", af.outer_iterations);
            get_to(a, "coarse_factor", af.coarse_factor);
            get_to(a, "zero_invalid", af.zero_invalid);
            get_to(a, "skip_negligible", af.skip_negligible);
            if (a.contains("pga")) {
                const json& p = a.at("pga");
                only_keys(p,
                          {"max_iterations", "initial_window", "window_shrink", "min_window", "snr_floor_db",
                           "target_bins", "rms_tolerance"},
                          "autofocus.pga");
                auto& g = af.estimators.pga;
                get_to(p, "max_iterations", g.max_iterations);
                get_to(p, "initial_window", g.initial_window);
                get_to(p, "window_shrink", g.window_shrink);
                get_to(p, "min_window", g.min_window);
                get_to(p, "snr_floor_db", g.snr_floor_db);
                get_to(p, "target_bins", g.target_bins);
                get_to(p, "rms_tolerance", g.rms_tolerance);
            }
            if (a.contains("rcm")) {
                const json& r = a.at("rcm");
                only_keys(r, {"reference", "upsample", "smoothing_degree", "sharpness_floor", "low_confidence_fraction"},
                          "autofocus.rcm");
                auto& g = af.estimators.rcm;
                if (r.contains("reference"))
                    g.reference = estimators::reference_from_string(r.at("reference").get<std::string>());
                get_to(r, "upsample", g.upsample);
                get_to(r, "smoothing_degree", g.smoothing_degree);
                get_to(r, "sharpness_floor", g.sharpness_floor);
                get_to(r, "low_confidence_fraction", g.low_confidence_fraction);
            }
        }
        if (j.contains("metrics")) {
            const json& m = j.at("metrics");
            only_keys(m, {"targets", "dynamic_range_db"}, "metrics");
            get_to(m, "targets", c.metrics_targets);
            get_to(m, "dynamic_range_db", c.export_dynamic_range_db);
        }
    } catch (const json::exception& e) {
        throw FormatError("malformed config: " + std::string(e.what()));
    } catch (const InputError& e) {
        throw FormatError("malformed config: " + std::string(e.what()));
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw FormatError("malformed config: " + std::string(e.what()));
    }
    return parse_config(j);
}

json to_json(const Config& c) {
    json targets = json::array();
    for (const auto& t : c.scene.targets)
        targets.push_back({{"x", t.x}, {"y", t.y}, {"amplitude", std::abs(t.amplitude)}, {"phase", std::arg(t.amplitude)}});
    const auto& af = c.autofocus;
    return {
        {"radar",
         {{"center_frequency", c.radar.center_frequency},
          {"bandwidth", c.radar.bandwidth},
          {"range_freq_samples", c.radar.range_freq_samples},
          {"pulse_count", c.radar.pulse_count},
          {"c", c.radar.c}}},
        {"geometry",
         {{"velocity", c.geometry.velocity},
          {"altitude", c.geometry.altitude},
          {"slant_range", c.geometry.slant_range},
          {"squint_deg", c.geometry.squint_deg},
          {"aperture_length", c.geometry.aperture_length}}},
        {"scene",
         {{"targets", targets},
          {"per_side", c.scene.per_side},
          {"spacing", c.scene.spacing},
          {"rotation_deg", c.scene.rotation_deg},
          {"offset", {c.scene.offset_x, c.scene.offset_y}},
          {"amplitudes", c.scene.amplitudes}}},
        {"error",
         {{"kind", c.error.kind},
          {"kappa2", c.error.params.kappa2},
          {"amplitude", c.error.params.amplitude},
          {"cycles", c.error.params.cycles},
          {"phase", c.error.params.phase},
          {"step_std", c.error.params.step_std},
          {"table", c.error.params.table}}},
        {"noise_snr_db", c.noise_snr_db ? json(*c.noise_snr_db) : json(nullptr)},
        {"seed", c.seed},
        {"pfa",
         {{"rows", c.pfa.grid.rows},
          {"cols", c.pfa.grid.cols},
          {"guard", c.pfa.grid.guard},
          {"taps", c.pfa.interp.taps},
          {"oversample", c.pfa.interp.oversample},
          {"kaiser_beta", c.pfa.interp.kaiser_beta},
          {"taper", pfa::to_string(c.taper)}}},
        {"autofocus",
         {{"mode", pipeline::to_string(af.mode)},
          {"coarse_rcm_stage", af.coarse_rcm_stage},
          {"fine_ape_stage", af.fine_ape_stage},
          {"outer_iterations", af.outer_iterations},
          {"coarse_factor", af.coarse_factor},
          {"zero_invalid", af.zero_invalid},
          {"skip_negligible", af.skip_negligible},
          {"pga",
           {{"max_iterations", af.estimators.pga.max_iterations},
            {"initial_window", af.estimators.pga.initial_window},
            {"window_shrink", af.estimators.pga.window_shrink},
            {"min_window", af.estimators.pga.min_window},
            {"snr_floor_db", af.estimators.pga.snr_floor_db},
            {"target_bins", af.estimators.pga.target_bins},
            {"rms_tolerance", af.estimators.pga.rms_tolerance}}},
          {"rcm",
           {{"reference", estimators::to_string(af.estimators.rcm.reference)},
            {"upsample", af.estimators.rcm.upsample},
            {"smoothing_degree", af.estimators.rcm.smoothing_degree},
            {"sharpness_floor", af.estimators.rcm.sharpness_floor},
            {"low_confidence_fraction", af.estimators.rcm.low_confidence_fraction}}}}},
        {"metrics", {{"targets", c.metrics_targets}, {"dynamic_range_db", c.export_dynamic_range_db}}}};
}

std::string config_hash(const Config& c) { return fnv1a_hex(to_json(c).dump()); }

sim::TargetScene build_scene(const SceneConfig& s) {
    sim::TargetScene scene;
    if (!s.targets.empty()) {
        scene.targets = s.targets;
        return scene;
    }
    require(s.per_side >= 1, "scene: per_side must be >= 1");
    const double rot = s.rotation_deg * std::numbers::pi / 180.0;
    const double cr = std::cos(rot), sr = std::sin(rot);
    const double half = 0.5 * static_cast<double>(s.per_side - 1);
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.per_side; ++i) {
        for (std::size_t j = 0; j < s.per_side; ++j, ++k) {
            const double u = (static_cast<double>(i) - half) * s.spacing;
            const double v = (static_cast<double>(j) - half) * s.spacing;
            const double a = s.amplitudes.empty() ? 1.0 : s.amplitudes[k % s.amplitudes.size()];
            scene.targets.push_back({cr * u - sr * v + s.offset_x, sr * u + cr * v + s.offset_y, {a, 0.0}});
        }
    }
    return scene;
}

sim::FlightGeometry build_geometry(const Config& c) {
    const auto& g = c.geometry;
    return sim::make_linear_geometry(c.radar, g.velocity, g.altitude, g.slant_range, g.squint_deg * std::numbers::pi / 180.0,
                                     g.aperture_length, c.radar.pulse_count);
}

sim::RangeErrorProfile build_error(const Config& c, const UniformAxis& slow_time) {
    if (c.error.kind == "none") return sim::zero_error(slow_time);
    sim::ErrorParams p = c.error.params;
    p.seed = c.seed;
    return sim::make_error_profile(c.error.kind, p, slow_time);
}

}  // namespace kasar::io
