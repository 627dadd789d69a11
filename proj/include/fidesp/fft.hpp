#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace fidesp::fft {

using cplx = std::complex<double>;

enum class Direction { Forward, Inverse };

/// In-place 1D DFT. Forward is y_k = sum_j x_j e^{-2 pi i jk/N}; Inverse
/// applies the conjugate kernel and the 1/N normalization.
void transform(std::span<cplx> data, Direction dir);

/// In-place 2D DFT of a row-major rows x cols array (same conventions).
void transform_2d(std::span<cplx> data, std::size_t rows, std::size_t cols,
                  Direction dir);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

}  // namespace fidesp::fft
