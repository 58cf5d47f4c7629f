#pragma once

// Thin FFTW wrapper. Plans are created once per size under a lock
// (FFTW's planner is not thread-safe) with FFTW_ESTIMATE | FFTW_UNALIGNED so
// the chosen algorithm never depends on buffer alignment; execution through
// the new-array interface is thread-safe and bitwise reproducible.

#include <complex>
#include <cstddef>
#include <span>

namespace wwlab {

/// out[j] = Σ_k in[k]·e(+jk/M), M = in.size() = out.size().
void dft_positive(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

/// out[j] = Σ_k in[k]·e(-jk/M).
void dft_negative(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace wwlab
