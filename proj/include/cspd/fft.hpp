#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cspd {

/// Unnormalized in-place multi-dimensional DFT over a row-major block.
/// Forward uses e^{-i k.x}, inverse e^{+i k.x}; neither scales.
void fft_nd(std::span<std::complex<double>> data, const std::vector<int>& dims, bool inverse);

}  // namespace cspd
