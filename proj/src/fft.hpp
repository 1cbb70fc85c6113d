#pragma once

#include <complex>
#include <span>

namespace fraclps::detail {

enum class Direction { Forward, Backward };

// Unnormalized in-place DFT over `howmany` interleaved transforms of shape
// n^dim (stride howmany, distance 1).
void dft(std::span<std::complex<double>> data, int dim, int n, int howmany, Direction dir);

// Unnormalized 1-d in-place DFT of arbitrary length.
void dft_1d(std::span<std::complex<double>> data, Direction dir);

}  // namespace fraclps::detail
