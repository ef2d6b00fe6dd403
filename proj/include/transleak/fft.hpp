#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace transleak {

// In-place radix-2 FFT, forward convention X_j = Σ_m x_m e^{-2πi jm/M}.
// All grids in this project are powers of two, which keeps this self-contained.
void fft_inplace(std::vector<std::complex<double>>& data, bool inverse);

inline void fft(std::vector<std::complex<double>>& data) { fft_inplace(data, false); }

// Unnormalized inverse (Σ with e^{+2πi jm/M}); divide by size() for the true inverse.
inline void ifft_unnormalized(std::vector<std::complex<double>>& data) {
  fft_inplace(data, true);
}

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace transleak
