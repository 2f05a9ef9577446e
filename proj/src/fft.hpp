#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wakenode::detail {

// One-sided real FFT of `input` zero-padded (or truncated) to `n` points.
// Returns n/2 + 1 bins.
std::vector<std::complex<double>> real_fft(std::span<const double> input, std::size_t n);

// Inverse of real_fft for a length-n real sequence (unnormalized, like FFTW).
std::vector<double> inverse_real_fft(std::span<const std::complex<double>> bins, std::size_t n);

std::size_t next_pow2(std::size_t n);

}  // namespace wakenode::detail
