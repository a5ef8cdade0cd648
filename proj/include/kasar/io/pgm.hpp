#pragma once

#include <cstdint>
#include <string>

#include "kasar/core/matrix.hpp"

namespace kasar::io {

using GrayImage = Matrix<std::uint16_t>;

/// 20 log10(|I| / max|I|) clipped to [-dynamic_range_db, 0] and scaled to 0..65535.
/// An all-zero image maps to all zeros.
GrayImage quantize_magnitude(const ComplexMatrix& img, double dynamic_range_db);

/// Binary 16-bit graymap (P5, maxval 65535, big-endian samples), written atomically.
void write_pgm(const std::string& path, const GrayImage& g);
GrayImage read_pgm(const std::string& path);

void export_magnitude(const ComplexMatrix& img, const std::string& path, double dynamic_range_db);

}  // namespace kasar::io
