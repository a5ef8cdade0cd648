#include "kasar/io/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kasar/core/error.hpp"
#include "kasar/io/dataset.hpp"

namespace kasar::io {

GrayImage quantize_magnitude(const ComplexMatrix& img, double dynamic_range_db) {
    require(dynamic_range_db > 0.0, "export: dynamic range must be > 0 dB");
    GrayImage g(img.rows(), img.cols(), 0);
    double top = 0.0;
    for (const cplx& v : img) top = std::max(top, std::abs(v));
    if (top == 0.0) return g;
    for (std::size_t k = 0; k < img.size(); ++k) {
        const double m = std::abs(img.data()[k]);
        if (m == 0.0) continue;
        const double db = std::clamp(20.0 * std::log10(m / top), -dynamic_range_db, 0.0);
        g.data()[k] = static_cast<std::uint16_t>(std::lround((db + dynamic_range_db) / dynamic_range_db * 65535.0));
    }
    return g;
}

void write_pgm(const std::string& path, const GrayImage& g) {
    std::string bytes = "P5\n" + std::to_string(g.cols()) + " " + std::to_string(g.rows()) + "\n65535\n";
    bytes.reserve(bytes.size() + 2 * g.size());
    for (std::uint16_t v : g) {
        bytes.push_back(static_cast<char>(v >> 8));
        bytes.push_back(static_cast<char>(v & 0xff));
    }
    write_atomic(path, bytes);
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "'");
    std::string magic;
    std::size_t w = 0, h = 0, maxval = 0;
    f >> magic >> w >> h >> maxval;
    if (magic != "P5" || !f || maxval != 65535) throw FormatError("not a 16-bit binary graymap: " + path);
    f.get();
    GrayImage g(h, w, 0);
    for (std::uint16_t& v : g) {
        const int hi = f.get(), lo = f.get();
        if (!f) throw FormatError("truncated graymap: " + path);
        v = static_cast<std::uint16_t>((hi << 8) | lo);
    }
    return g;
}

void export_magnitude(const ComplexMatrix& img, const std::string& path, double dynamic_range_db) {
    write_pgm(path, quantize_magnitude(img, dynamic_range_db));
}

}  // namespace kasar::io
