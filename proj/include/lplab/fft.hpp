#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lplab {

using Complex = std::complex<double>;

/// X_k = sum_j x_j exp(-2 pi i j k / M), unnormalized.
std::vector<Complex> forward_dft(std::span<const Complex> samples);

/// x_j = sum_k X_k exp(+2 pi i j k / M), unnormalized: feeding trigonometric
/// coefficients (bin k mod M) gives samples on x_j = 2 pi j / M.
std::vector<Complex> inverse_dft(std::span<const Complex> coefficients);

bool is_power_of_two(std::size_t m);
std::size_t next_power_of_two(std::size_t m);

} // namespace lplab
