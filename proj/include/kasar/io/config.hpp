#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "kasar/pfa/image.hpp"
#include "kasar/pipeline/pipeline.hpp"
#include "kasar/sim/radar.hpp"

namespace kasar::io {

struct GeometryConfig {
    double velocity = 120.0;        // m/s
    double altitude = 0.0;          // m
    double slant_range = 8000.0;    // m
    double squint_deg = 15.0;
    double aperture_length = 540.0; // m
};

/// Explicit targets win; otherwise a rotated square grid is generated.
struct SceneConfig {
    std::vector<sim::Target> targets;
    std::size_t per_side = 3;
    double spacing = 30.0;       // m
    double rotation_deg = 12.0;
    double offset_x = 0.37, offset_y = 0.61;  // m
    std::vector<double> amplitudes{1.0, 0.8, 0.9, 0.7, 1.0, 0.85, 0.75, 0.95, 0.8};
};

struct ErrorConfig {
    std::string kind = "sinusoid";
    sim::ErrorParams params{0.0, 0.12, 6.0, 1.5707963267948966, 0.0, 0, {}};
};

struct Config {
    sim::RadarParams radar;
    GeometryConfig geometry;
    SceneConfig scene;
    ErrorConfig error;
    std::optional<double> noise_snr_db;
    std::uint64_t seed = 1;
    pfa::PfaConfig pfa;
    pfa::TaperKind taper = pfa::TaperKind::none;
    pipeline::PipelineConfig autofocus;
    std::size_t metrics_targets = 9;
    double export_dynamic_range_db = 50.0;
};

/// Defaults equal configs/canonical.json.
Config default_config();
/// Missing keys keep their defaults; unknown keys or wrong types throw FormatError.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);
nlohmann::json to_json(const Config& c);
/// FNV-1a of the normalized config JSON.
std::string config_hash(const Config& c);

sim::TargetScene build_scene(const SceneConfig& s);
sim::FlightGeometry build_geometry(const Config& c);
sim::RangeErrorProfile build_error(const Config& c, const UniformAxis& slow_time);

}  // namespace kasar::io
