#pragma once

#include <complex>
#include <span>

namespace wfkdv::detail {

// Unnormalized DFT: out_k = Σ_j in_j e^{∓2πi jk/n}. in and out may alias.
void fft_forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
void fft_backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

}  // namespace wfkdv::detail
