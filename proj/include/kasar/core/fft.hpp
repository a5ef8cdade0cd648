#pragma once

#include <span>

#include "kasar/core/matrix.hpp"

namespace kasar::fft {

/// Forward uses exp(-i...) without scaling; inverse uses exp(+i...) and divides by N.
enum class Direction { forward, inverse };

/// Centered DFT: sample index i stands for i - N/2 on both sides of the transform.
void centered(std::span<cplx> data, Direction dir);

/// Centered DFT along every row (length cols()).
void centered_rows(ComplexMatrix& m, Direction dir);

/// Centered DFT along every column (length rows()).
void centered_cols(ComplexMatrix& m, Direction dir);

/// Plain (uncentered) DFT, same scaling convention.
void plain(std::span<cplx> data, Direction dir);

}  // namespace kasar::fft
