#include "kasar/io/dataset.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unistd.h>

#include "kasar/core/error.hpp"

namespace kasar::io {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(DatasetKind k) {
    switch (k) {
        case DatasetKind::phase_history: return "phase-history";
        case DatasetKind::spectrum: return "spectrum";
        case DatasetKind::image: return "image";
        case DatasetKind::surface: return "surface";
    }
    return "unknown";
}

DatasetKind kind_from_string(const std::string& s) {
    if (s == "phase-history") return DatasetKind::phase_history;
    if (s == "spectrum") return DatasetKind::spectrum;
    if (s == "image") return DatasetKind::image;
    if (s == "surface") return DatasetKind::surface;
    throw FormatError("unknown dataset kind '" + s + "'");
}

std::string to_string(ElementType e) { return e == ElementType::complex64 ? "complex64" : "float32"; }

std::size_t element_size(ElementType e) { return e == ElementType::complex64 ? 8 : 4; }

std::string header_path(const std::string& payload) { return payload + ".hdr.json"; }

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

void write_atomic(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        f.flush();
        if (!f) {
            f.close();
            fs::remove(tmp);
            throw std::runtime_error("write failed for '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename into '" + path + "': " + ec.message());
    }
}

namespace {

void put_f32(std::string& out, float v) {
    std::uint32_t u = std::bit_cast<std::uint32_t>(v);
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap32(u);
    char b[4];
    std::memcpy(b, &u, 4);
    out.append(b, 4);
}

float get_f32(const char* p) {
    std::uint32_t u;
    std::memcpy(&u, p, 4);
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap32(u);
    return std::bit_cast<float>(u);
}

json axis_json(const AxisDescriptor& a) { return {{"name", a.name}, {"unit", a.unit}, {"start", a.start}, {"step", a.step}}; }

AxisDescriptor axis_from(const json& j) {
    return {j.at("name").get<std::string>(), j.at("unit").get<std::string>(), j.at("start").get<double>(),
            j.at("step").get<double>()};
}

/// Axis names and units each kind must carry.
std::pair<AxisDescriptor, AxisDescriptor> expected_units(DatasetKind k) {
    switch (k) {
        case DatasetKind::phase_history: return {{"slow_time", "s"}, {"range_frequency", "Hz"}};
        case DatasetKind::spectrum:
        case DatasetKind::surface: return {{"X", "rad/m"}, {"Y", "rad/m"}};
        case DatasetKind::image: return {{"azimuth", "m"}, {"range", "m"}};
    }
    return {};
}

void write_header(const std::string& path, const DatasetHeader& h) {
    json j;
    j["format_version"] = h.version;
    j["kind"] = to_string(h.kind);
    j["rows"] = h.rows;
    j["cols"] = h.cols;
    j["element"] = to_string(h.element);
    j["axes"] = json::array({axis_json(h.row_axis), axis_json(h.col_axis)});
    j["provenance"] = {{"config_hash", h.provenance.config_hash}, {"tool_version", h.provenance.tool_version}};
    j["meta"] = h.meta;
    write_atomic(header_path(path), j.dump(2) + "\n");
}

void check_header(const DatasetHeader& h) {
    const auto [r, c] = expected_units(h.kind);
    if (h.row_axis.unit != r.unit || h.col_axis.unit != c.unit)
        throw FormatError("axis units do not match kind " + to_string(h.kind));
    const ElementType want = h.kind == DatasetKind::surface ? ElementType::float32 : ElementType::complex64;
    if (h.element != want) throw FormatError("element type does not match kind " + to_string(h.kind));
}

}  // namespace

void write_dataset(const std::string& path, const DatasetHeader& h, const ComplexMatrix& m) {
    require(h.element == ElementType::complex64, "write_dataset: complex payload needs complex64");
    require(h.rows == m.rows() && h.cols == m.cols(), "write_dataset: header shape differs from matrix");
    check_header(h);
    std::string bytes;
    bytes.reserve(m.size() * 8);
    for (const cplx& v : m) {
        put_f32(bytes, static_cast<float>(v.real()));
        put_f32(bytes, static_cast<float>(v.imag()));
    }
    write_atomic(path, bytes);
    write_header(path, h);
}

void write_dataset(const std::string& path, const DatasetHeader& h, const RealMatrix& m) {
    require(h.element == ElementType::float32, "write_dataset: real payload needs float32");
    require(h.rows == m.rows() && h.cols == m.cols(), "write_dataset: header shape differs from matrix");
    check_header(h);
    std::string bytes;
    bytes.reserve(m.size() * 4);
    for (double v : m) put_f32(bytes, static_cast<float>(v));
    write_atomic(path, bytes);
    write_header(path, h);
}

DatasetHeader read_header(const std::string& path) {
    std::ifstream f(header_path(path));
    if (!f) throw FormatError("missing header '" + header_path(path) + "'");
    json j;
    try {
        j = json::parse(f);
    } catch (const json::exception& e) {
        throw FormatError("malformed header: " + std::string(e.what()));
    }
    DatasetHeader h;
    try {
        h.version = j.at("format_version").get<int>();
        if (h.version != kFormatVersion)
            throw FormatError("format version mismatch: file has " + std::to_string(h.version) + ", expected " +
                              std::to_string(kFormatVersion));
        h.kind = kind_from_string(j.at("kind").get<std::string>());
        h.rows = j.at("rows").get<std::size_t>();
        h.cols = j.at("cols").get<std::size_t>();
        const std::string el = j.at("element").get<std::string>();
        if (el == "complex64")
            h.element = ElementType::complex64;
        else if (el == "float32")
            h.element = ElementType::float32;
        else
            throw FormatError("unknown element type '" + el + "'");
        const json& axes = j.at("axes");
        if (!axes.is_array() || axes.size() != 2) throw FormatError("header needs two axes");
        h.row_axis = axis_from(axes[0]);
        h.col_axis = axis_from(axes[1]);
        h.provenance.config_hash = j.at("provenance").at("config_hash").get<std::string>();
        h.provenance.tool_version = j.at("provenance").at("tool_version").get<std::string>();
        h.meta = j.value("meta", json::object());
    } catch (const json::exception& e) {
        throw FormatError("malformed header: " + std::string(e.what()));
    }
    check_header(h);
    return h;
}

Dataset read_dataset(const std::string& path) {
    Dataset d;
    d.header = read_header(path);
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("missing payload '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const std::size_t want = d.header.rows * d.header.cols * element_size(d.header.element);
    if (bytes.size() != want)
        throw FormatError("payload size mismatch: " + std::to_string(bytes.size()) + " bytes, header implies " +
                          std::to_string(want));
    const char* p = bytes.data();
    if (d.header.element == ElementType::complex64) {
        d.complex = ComplexMatrix(d.header.rows, d.header.cols);
        for (cplx& v : d.complex) {
            v = {get_f32(p), get_f32(p + 4)};
            p += 8;
        }
    } else {
        d.real = RealMatrix(d.header.rows, d.header.cols);
        for (double& v : d.real) {
            v = get_f32(p);
            p += 4;
        }
    }
    return d;
}

json encode_mask(const Mask& m) {
    json runs = json::array();
    const std::size_t n = m.size();
    std::size_t i = 0;
    while (i < n) {
        if (m.data()[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !m.data()[j]) ++j;
        runs.push_back({i, j - i});
        i = j;
    }
    return runs;
}

Mask decode_mask(const json& j, std::size_t rows, std::size_t cols) {
    Mask m(rows, cols, 1);
    for (const json& r : j) {
        const auto start = r.at(0).get<std::size_t>(), len = r.at(1).get<std::size_t>();
        if (start + len > m.size()) throw FormatError("mask run outside matrix");
        std::fill(m.data() + start, m.data() + start + len, std::uint8_t{0});
    }
    return m;
}

namespace {

json uaxis(const UniformAxis& a) { return {{"center", a.center}, {"step", a.step}, {"size", a.size}}; }
UniformAxis uaxis_from(const json& j) {
    return {j.at("center").get<double>(), j.at("step").get<double>(), j.at("size").get<std::size_t>()};
}

template <typename F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw FormatError("malformed metadata: " + std::string(e.what()));
    }
}

}  // namespace

json encode_grid(const CartesianGrid& g) {
    return {{"x", uaxis(g.x)},
            {"y", uaxis(g.y)},
            {"y0", g.y0},
            {"fc", g.fc},
            {"sin_ref", g.sin_ref},
            {"c", g.c},
            {"keystone",
             {{"slow_time", uaxis(g.keystone.slow_time)},
              {"tan_theta", g.keystone.tan_theta},
              {"omega", g.keystone.omega},
              {"t_limit", g.keystone.t_limit}}}};
}

CartesianGrid decode_grid(const json& j) {
    return guarded([&] {
        CartesianGrid g;
        g.x = uaxis_from(j.at("x"));
        g.y = uaxis_from(j.at("y"));
        g.y0 = j.at("y0").get<double>();
        g.fc = j.at("fc").get<double>();
        g.sin_ref = j.at("sin_ref").get<double>();
        g.c = j.at("c").get<double>();
        const json& k = j.at("keystone");
        g.keystone.slow_time = uaxis_from(k.at("slow_time"));
        g.keystone.tan_theta = k.at("tan_theta").get<std::vector<double>>();
        g.keystone.omega = k.at("omega").get<double>();
        g.keystone.t_limit = k.at("t_limit").get<double>();
        return g;
    });
}

namespace {

DatasetHeader make_header(DatasetKind kind, std::size_t rows, std::size_t cols, const Provenance& prov) {
    DatasetHeader h;
    h.kind = kind;
    h.rows = rows;
    h.cols = cols;
    h.element = kind == DatasetKind::surface ? ElementType::float32 : ElementType::complex64;
    auto [r, c] = expected_units(kind);
    h.row_axis = r;
    h.col_axis = c;
    h.provenance = prov;
    return h;
}

void expect_kind(const DatasetHeader& h, DatasetKind want) {
    if (h.kind != want)
        throw KindMismatch("expected a " + to_string(want) + " dataset, got " + to_string(h.kind));
}

void set_grid_axes(DatasetHeader& h, const CartesianGrid& g) {
    h.row_axis.start = g.x.front();
    h.row_axis.step = g.x.step;
    h.col_axis.start = g.y.front();
    h.col_axis.step = g.y.step;
}

}  // namespace

void save_phase_history(const std::string& path, const sim::PhaseHistory& ph, const Provenance& prov) {
    DatasetHeader h = make_header(DatasetKind::phase_history, ph.data.rows(), ph.data.cols(), prov);
    const UniformAxis fr = ph.radar.range_freq_axis();
    h.row_axis.start = ph.geometry.slow_time.front();
    h.row_axis.step = ph.geometry.slow_time.step;
    h.col_axis.start = fr.front();
    h.col_axis.step = fr.step;
    json apc = json::array();
    for (const auto& p : ph.geometry.apc) apc.push_back({p.x, p.y, p.z});
    h.meta = {{"radar",
               {{"center_frequency", ph.radar.center_frequency},
                {"bandwidth", ph.radar.bandwidth},
                {"range_freq_samples", ph.radar.range_freq_samples},
                {"pulse_count", ph.radar.pulse_count},
                {"c", ph.radar.c}}},
              {"geometry",
               {{"slow_time", uaxis(ph.geometry.slow_time)},
                {"apc", apc},
                {"squint", ph.geometry.squint}}}};
    write_dataset(path, h, ph.data);
}

sim::PhaseHistory load_phase_history(const std::string& path) {
    Dataset d = read_dataset(path);
    expect_kind(d.header, DatasetKind::phase_history);
    return guarded([&] {
        const json& m = d.header.meta;
        sim::PhaseHistory ph;
        const json& r = m.at("radar");
        ph.radar.center_frequency = r.at("center_frequency").get<double>();
        ph.radar.bandwidth = r.at("bandwidth").get<double>();
        ph.radar.range_freq_samples = r.at("range_freq_samples").get<std::size_t>();
        ph.radar.pulse_count = r.at("pulse_count").get<std::size_t>();
        ph.radar.c = r.at("c").get<double>();
        const json& g = m.at("geometry");
        std::vector<sim::Vec3> pos;
        for (const json& p : g.at("apc")) pos.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
        ph.geometry = sim::geometry_from_positions(uaxis_from(g.at("slow_time")), pos, g.at("squint").get<double>());
        ph.data = std::move(d.complex);
        if (ph.data.rows() != ph.radar.pulse_count || ph.data.cols() != ph.radar.range_freq_samples)
            throw FormatError("phase history shape differs from radar metadata");
        return ph;
    });
}

void save_spectrum(const std::string& path, const pfa::CartesianSpectrum& s, const Provenance& prov) {
    DatasetHeader h = make_header(DatasetKind::spectrum, s.data.rows(), s.data.cols(), prov);
    set_grid_axes(h, s.grid);
    h.meta = {{"grid", encode_grid(s.grid)},
              {"coverage", s.coverage.empty() ? json::array() : encode_mask(s.coverage)}};
    write_dataset(path, h, s.data);
}

pfa::CartesianSpectrum load_spectrum(const std::string& path) {
    Dataset d = read_dataset(path);
    expect_kind(d.header, DatasetKind::spectrum);
    pfa::CartesianSpectrum s;
    s.grid = decode_grid(guarded([&] { return d.header.meta.at("grid"); }));
    s.coverage = guarded([&] { return decode_mask(d.header.meta.at("coverage"), d.header.rows, d.header.cols); });
    s.data = std::move(d.complex);
    if (s.data.rows() != s.grid.rows() || s.data.cols() != s.grid.cols())
        throw FormatError("spectrum shape differs from grid metadata");
    return s;
}

void save_image(const std::string& path, const pfa::ComplexImage& img, const Provenance& prov) {
    DatasetHeader h = make_header(DatasetKind::image, img.data.rows(), img.data.cols(), prov);
    h.row_axis.start = img.x_position(0.0);
    h.row_axis.step = img.pixel_x();
    h.col_axis.start = img.y_position(0.0);
    h.col_axis.step = img.pixel_y();
    h.meta = {{"grid", encode_grid(img.grid)},
              {"coverage", img.coverage.empty() ? json::array() : encode_mask(img.coverage)},
              {"taper", pfa::to_string(img.taper)},
              {"pixel_x", img.pixel_x()},
              {"pixel_y", img.pixel_y()}};
    write_dataset(path, h, img.data);
}

pfa::ComplexImage load_image(const std::string& path) {
    Dataset d = read_dataset(path);
    expect_kind(d.header, DatasetKind::image);
    pfa::ComplexImage img;
    img.grid = decode_grid(guarded([&] { return d.header.meta.at("grid"); }));
    img.coverage = guarded([&] { return decode_mask(d.header.meta.at("coverage"), d.header.rows, d.header.cols); });
    try {
        img.taper = pfa::taper_from_string(guarded([&] { return d.header.meta.at("taper").get<std::string>(); }));
    } catch (const InputError& e) {
        throw FormatError(e.what());
    }
    img.data = std::move(d.complex);
    if (img.data.rows() != img.grid.rows() || img.data.cols() != img.grid.cols())
        throw FormatError("image shape differs from grid metadata");
    return img;
}

void save_surface(const std::string& path, const structure::PhaseErrorSurface& s, const Provenance& prov) {
    DatasetHeader h = make_header(DatasetKind::surface, s.values.rows(), s.values.cols(), prov);
    h.row_axis.start = s.x.front();
    h.row_axis.step = s.x.step;
    h.col_axis.start = s.y.front();
    h.col_axis.step = s.y.step;
    h.meta = {{"x", uaxis(s.x)}, {"y", uaxis(s.y)}, {"y0", s.y0}, {"validity", encode_mask(s.valid)}};
    write_dataset(path, h, s.values);
}

structure::PhaseErrorSurface load_surface(const std::string& path) {
    Dataset d = read_dataset(path);
    expect_kind(d.header, DatasetKind::surface);
    return guarded([&] {
        structure::PhaseErrorSurface s;
        const json& m = d.header.meta;
        s.x = uaxis_from(m.at("x"));
        s.y = uaxis_from(m.at("y"));
        s.y0 = m.at("y0").get<double>();
        s.valid = decode_mask(m.at("validity"), d.header.rows, d.header.cols);
        s.values = std::move(d.real);
        if (s.values.rows() != s.x.size || s.values.cols() != s.y.size)
            throw FormatError("surface shape differs from its axes");
        return s;
    });
}

void write_profile_csv(const std::string& path, const UniformAxis& x, const std::vector<double>& v) {
    require(v.size() == x.size, "write_profile_csv: length mismatch");
    std::ostringstream os;
    os << std::setprecision(17) << "X,value\n";
    for (std::size_t i = 0; i < v.size(); ++i) os << x.value(i) << ',' << v[i] << '\n';
    write_atomic(path, os.str());
}

}  // namespace kasar::io
