#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "kasar/core/matrix.hpp"
#include "kasar/pfa/image.hpp"
#include "kasar/sim/radar.hpp"
#include "kasar/structure/surface.hpp"

namespace kasar::io {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "kasar 1.0.0";

enum class DatasetKind { phase_history, spectrum, image, surface };
enum class ElementType { complex64, float32 };

std::string to_string(DatasetKind k);
DatasetKind kind_from_string(const std::string& s);  // FormatError on unknown
std::string to_string(ElementType e);
std::size_t element_size(ElementType e);

struct AxisDescriptor {
    std::string name, unit;
    double start = 0.0, step = 0.0;
};

struct Provenance {
    std::string config_hash;  // FNV-1a of the canonical config text, hex
    std::string tool_version = kToolVersion;
};

struct DatasetHeader {
    int version = kFormatVersion;
    DatasetKind kind = DatasetKind::image;
    std::size_t rows = 0, cols = 0;
    ElementType element = ElementType::complex64;
    AxisDescriptor row_axis, col_axis;
    Provenance provenance;
    nlohmann::json meta = nlohmann::json::object();
};

/// Writes to a temporary next to path, then renames over it.
void write_atomic(const std::string& path, const std::string& bytes);

/// Sidecar header path for a payload path.
std::string header_path(const std::string& payload);

/// Payload little-endian, row-major; header JSON next to it. Both written atomically.
void write_dataset(const std::string& path, const DatasetHeader& h, const ComplexMatrix& m);
void write_dataset(const std::string& path, const DatasetHeader& h, const RealMatrix& m);

DatasetHeader read_header(const std::string& path);

struct Dataset {
    DatasetHeader header;
    ComplexMatrix complex;  // complex64 payloads
    RealMatrix real;        // float32 payloads
};
Dataset read_dataset(const std::string& path);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Run-length list of masked (0) cells in row-major order: [[start, length], ...].
nlohmann::json encode_mask(const Mask& m);
Mask decode_mask(const nlohmann::json& j, std::size_t rows, std::size_t cols);

nlohmann::json encode_grid(const CartesianGrid& g);
CartesianGrid decode_grid(const nlohmann::json& j);

void save_phase_history(const std::string& path, const sim::PhaseHistory& ph, const Provenance& prov = {});
sim::PhaseHistory load_phase_history(const std::string& path);

void save_spectrum(const std::string& path, const pfa::CartesianSpectrum& s, const Provenance& prov = {});
pfa::CartesianSpectrum load_spectrum(const std::string& path);

void save_image(const std::string& path, const pfa::ComplexImage& img, const Provenance& prov = {});
pfa::ComplexImage load_image(const std::string& path);

void save_surface(const std::string& path, const structure::PhaseErrorSurface& s, const Provenance& prov = {});
structure::PhaseErrorSurface load_surface(const std::string& path);

/// Profiles as two-column CSV (X, value).
void write_profile_csv(const std::string& path, const UniformAxis& x, const std::vector<double>& v);

}  // namespace kasar::io
